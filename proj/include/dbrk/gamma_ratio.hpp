#pragma once

#include <optional>
#include <vector>

#include "dbrk/combinatorics.hpp"
#include "dbrk/errors.hpp"
#include "dbrk/rational.hpp"

namespace dbrk {

/// A product of gamma values over a product of gamma values, given by the
/// argument lists. Reducible exactly when the arguments pair up with integer
/// differences; each pair telescopes through Gamma(x+1) = x Gamma(x).
struct GammaRatioSpec {
  std::vector<Rational> num;
  std::vector<Rational> den;
};

namespace detail {

// Gamma(v + m) / Gamma(v) for integer m, as a limit along matched arguments:
// (v)_m for m >= 0, 1/(v-|m|+k...) below. Returns nullopt when the ratio
// diverges (numerator pole against a finite denominator).
inline std::optional<Rational> gamma_pair_ratio(const Rational& den_arg, long m) {
  if (m >= 0) return pochhammer(den_arg, static_cast<unsigned>(m));
  Rational p = pochhammer(den_arg + m, static_cast<unsigned>(-m));
  if (p == 0) return std::nullopt;
  return Rational(1) / p;
}

inline bool match_pairs(const std::vector<Rational>& num, std::vector<Rational> den,
                        std::vector<std::pair<Rational, Rational>>& out, std::size_t i = 0) {
  if (i == num.size()) return true;
  for (std::size_t j = 0; j < den.size(); ++j) {
    if (!is_integer(num[i] - den[j])) continue;
    auto rest = den;
    rest.erase(rest.begin() + static_cast<long>(j));
    out.emplace_back(num[i], den[j]);
    if (match_pairs(num, std::move(rest), out, i + 1)) return true;
    out.pop_back();
  }
  return false;
}

}  // namespace detail

/// Exact value of the gamma ratio. A pole in a denominator gamma (with the
/// matched numerator argument finite) makes the whole ratio 0; a numerator
/// pole against a finite denominator is UNDEFINED; arguments that cannot be
/// paired with integer differences are UNMATCHED.
inline Rational gamma_ratio_exact(const GammaRatioSpec& spec) {
  if (spec.num.size() != spec.den.size())
    fail(errc::unmatched, "gamma ratio needs equally many numerator and denominator arguments");
  std::vector<std::pair<Rational, Rational>> pairs;
  if (!detail::match_pairs(spec.num, spec.den, pairs))
    fail(errc::unmatched, "no integer-difference pairing of gamma arguments exists");
  Rational value(1);
  for (const auto& [u, v] : pairs) {
    long m = (numerator(u - v) / denominator(u - v)).convert_to<long>();
    auto r = detail::gamma_pair_ratio(v, m);
    if (!r) fail(errc::undefined, "gamma pole in the numerator with finite denominator");
    value *= *r;
  }
  return value;
}

/// Gamma-function closed form for A_{n,r,s} on 0 <= r <= n < s <= 2n; the
/// value does not depend on r there. Odd s puts a pole in the denominator,
/// so the ratio -- and the coefficient -- is exactly 0.
inline Rational anrs_gamma(unsigned n, unsigned r, unsigned s) {
  if (!(r <= n && n < s && s <= 2 * n))
    fail(errc::domain, "anrs_gamma requires 0 <= r <= n < s <= 2n");
  GammaRatioSpec spec;
  Rational sq(s);
  spec.num = {(sq - n + 1) / 2, (sq - n + 2) / 2};
  spec.den = {(sq - 2 * static_cast<long>(n) + 1) / 2, (sq + 2) / 2};
  return Rational(binomial(s, n)) * gamma_ratio_exact(spec);
}

}  // namespace dbrk
