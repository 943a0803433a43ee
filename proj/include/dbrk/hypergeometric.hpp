#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <optional>
#include <vector>

#include "dbrk/combinatorics.hpp"
#include "dbrk/errors.hpp"
#include "dbrk/field.hpp"
#include "dbrk/gamma_ratio.hpp"
#include "dbrk/rational.hpp"

namespace dbrk {

/// Parameters of a 2F1 series. z_exact is set when the argument is rational;
/// the exact evaluation paths require it.
struct HyperSpec {
  Rational a;
  Rational b;
  Rational c;
  CDouble z{};
  std::optional<Rational> z_exact{};

  HyperSpec(Rational a_, Rational b_, Rational c_, Rational z_)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), z_exact(std::move(z_)) {
    z = CDouble(to_double(*z_exact), 0.0);
  }
  HyperSpec(Rational a_, Rational b_, Rational c_, CDouble z_)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), z(z_) {}
};

namespace detail {

// Termination index when a (or b) is a non-positive integer, smallest first.
inline std::optional<unsigned> terminating_order(const Rational& a, const Rational& b) {
  std::optional<unsigned> n;
  if (is_nonpositive_integer(a)) n = static_cast<unsigned>((-numerator(a)).convert_to<long>());
  if (is_nonpositive_integer(b)) {
    auto m = static_cast<unsigned>((-numerator(b)).convert_to<long>());
    if (!n || m < *n) n = m;
  }
  return n;
}

// (c)_p must stay nonzero for p = 1..n, i.e. c not in {0,-1,...,-(n-1)}.
inline void require_no_parameter_pole(const Rational& c, unsigned n) {
  if (is_nonpositive_integer(c) && -c < n)
    fail(errc::parameter_pole, "(c)_p vanishes before the series terminates");
}

}  // namespace detail

/// Exact value of a terminating 2F1 with rational parameters and argument.
inline Rational hyp2f1_exact(const HyperSpec& spec) {
  if (!spec.z_exact) fail(errc::domain, "hyp2f1_exact needs a rational argument");
  auto n = detail::terminating_order(spec.a, spec.b);
  if (!n) fail(errc::domain, "hyp2f1_exact needs a non-positive-integer upper parameter");
  detail::require_no_parameter_pole(spec.c, *n);
  const Rational& z = *spec.z_exact;
  Rational term(1), sum(1);
  for (unsigned p = 0; p < *n; ++p) {
    term *= (spec.a + p) * (spec.b + p) * z;
    term /= (spec.c + p) * Rational(p + 1);
    sum += term;
  }
  return sum;
}

struct Hyp2F1Numeric {
  CDouble value{};
  double tail_bound = 0;  // majorant of the truncation error actually achieved
  unsigned terms = 0;
};

/// Partial sums of the series with a geometric tail majorant: for p beyond
/// the preasymptotic range, |t_{p+1}/t_p| <= (1 + D/p)|z| with
/// D = 2(|a|+|b|+2|c|+1), so once that bound is < 1 the tail is a geometric
/// series. On |z| = 1 (terms decay like p^{-1-Re(c-a-b)}) the tail estimate
/// |t_p| p / Re(c-a-b) is asymptotic rather than a hard bound.
inline Hyp2F1Numeric hyp2f1_numeric(const HyperSpec& spec, double tol) {
  const double az = std::abs(spec.z);
  const double eps_circle = 1e-13;
  const double sigma = to_double(spec.c - spec.a - spec.b);
  if (auto n = detail::terminating_order(spec.a, spec.b)) {
    detail::require_no_parameter_pole(spec.c, *n);
    CDouble term(1), sum(1);
    double a = to_double(spec.a), b = to_double(spec.b), c = to_double(spec.c);
    for (unsigned p = 0; p < *n; ++p) {
      term *= (a + p) * (b + p) * spec.z / ((c + p) * (p + 1.0));
      sum += term;
    }
    return {sum, 0.0, *n + 1};
  }
  const bool on_circle = std::abs(az - 1.0) <= eps_circle;
  if (az > 1.0 + eps_circle || (on_circle && sigma <= 0))
    fail(errc::no_convergence, "2F1 series diverges for these parameters");
  if (is_nonpositive_integer(spec.c)) fail(errc::parameter_pole, "c is a pole of the series");

  double a = to_double(spec.a), b = to_double(spec.b), c = to_double(spec.c);
  const double D = 2.0 * (std::abs(a) + std::abs(b) + 2.0 * std::abs(c) + 1.0);
  const double j0 = std::max({2.0 * std::abs(c) + 1.0, std::abs(a) + std::abs(b) + 1.0, 4.0});
  CDouble term(1), sum(1);
  for (unsigned p = 0; p < 50'000'000; ++p) {
    term *= (a + p) * (b + p) * spec.z / ((c + p) * (p + 1.0));
    sum += term;
    double at = std::abs(term);
    if (p + 1 < j0) continue;
    if (!on_circle) {
      double q = (1.0 + D / (p + 1)) * az;
      if (q < 1.0) {
        double tail = at * q / (1.0 - q);
        if (tail <= tol) return {sum, tail, p + 2};
      }
    } else {
      double tail = 1.5 * at * (p + 1) / std::min(sigma, 1.0);
      if (tail <= tol && at <= tol) return {sum, tail, p + 2};
    }
  }
  fail(errc::no_convergence, "2F1 series did not reach the tolerance");
}

/// Exact residual of Euler's transformation when one side terminates
/// (a = -n after swapping). The transformed side times (1-z)^{c-a-b}
/// collapses to the polynomial
///   sum_j Delta^j q(0)/j! (c-b)_j z^j (1-z)^{n-j},  q(p) = (c+p)_n/(c)_n,
/// because (c+n)_p (c-b)_p / ((c)_p p!) = q(p) (c-b)_p / p! and the Newton
/// expansion of q in falling factorials turns each piece into a binomial
/// series with a non-negative integer exponent left over.
inline Rational check_euler_exact(const Rational& a, const Rational& b, const Rational& c,
                                  const Rational& z) {
  Rational aa = a, bb = b;
  if (!is_nonpositive_integer(aa)) std::swap(aa, bb);
  if (!is_nonpositive_integer(aa))
    fail(errc::domain, "exact Euler check needs a terminating parameter");
  auto n = static_cast<unsigned>((-numerator(aa)).convert_to<long>());
  detail::require_no_parameter_pole(c, n + 1);  // (c)_n itself must be nonzero
  Rational lhs = hyp2f1_exact(HyperSpec(aa, bb, c, z));

  Rational cn = pochhammer(c, n);
  std::vector<Rational> q;
  q.reserve(n + 1);
  for (unsigned p = 0; p <= n; ++p) q.push_back(pochhammer(c + p, n) / cn);
  Rational beta = c - bb;
  Rational rhs(0);
  for (unsigned j = 0; j <= n; ++j) {
    Rational coeff = difference_power(q, j) / Rational(factorial(j));
    rhs += coeff * pochhammer(beta, j) * pow_rational(z, j) *
           pow_rational(Rational(1) - z, static_cast<long>(n - j));
  }
  return lhs - rhs;
}

/// |lhs - rhs| for Euler's transformation; exact (and exactly 0) whenever a
/// or b is a non-positive integer, numeric with tolerance `tol` otherwise.
inline double check_euler(const Rational& a, const Rational& b, const Rational& c,
                          const Rational& z, double tol) {
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b))
    return std::abs(to_double(check_euler_exact(a, b, c, z)));
  double zd = to_double(z);
  if (std::abs(zd) > 0.5) fail(errc::domain, "euler check restricted to |z| <= 1/2");
  CDouble lhs = hyp2f1_numeric(HyperSpec(a, b, c, z), tol * 0.01).value;
  CDouble rhs = hyp2f1_numeric(HyperSpec(c - a, c - b, c, z), tol * 0.01).value;
  rhs *= std::pow(1.0 - zd, to_double(c - a - b));
  return std::abs(lhs - rhs);
}

/// Exact residual of Pfaff's z = 1/2 <-> z = -1 transformation (terminating).
inline Rational check_pfaff(const Rational& a, const Rational& b, const Rational& c) {
  if (!is_nonpositive_integer(a))
    fail(errc::domain, "pfaff check needs a non-positive integer a");
  if (!(b - a > -1)) fail(errc::domain, "pfaff check needs Re(b - a) > -1");
  auto n = static_cast<long>((-numerator(a)).convert_to<long>());
  Rational lhs = hyp2f1_exact(HyperSpec(a, b, c, Rational(1, 2)));
  Rational rhs = pow_rational(Rational(2), -n) * hyp2f1_exact(HyperSpec(a, c - b, c, Rational(-1)));
  return lhs - rhs;
}

/// Exact residual of the m-fold contiguous relation
///   sum_k C(m,k)(z-1)^{-k} 2F1[a, b-k; c; z]
///     = (c-a)_m/(c)_m (z/(z-1))^m 2F1[a, b; c+m; z]
/// with every series terminating (a = -n).
inline Rational check_zeng_lemma(const Rational& a, const Rational& b, const Rational& c,
                                 unsigned m, const Rational& z) {
  if (!is_nonpositive_integer(a))
    fail(errc::domain, "difference-operator lemma check needs a non-positive integer a");
  if (z == 1) fail(errc::domain, "z = 1 is outside the lemma");
  Rational lhs(0);
  for (unsigned k = 0; k <= m; ++k) {
    lhs += Rational(binomial(m, k)) * pow_rational(z - 1, -static_cast<long>(k)) *
           hyp2f1_exact(HyperSpec(a, b - k, c, z));
  }
  Rational rhs = pochhammer(c - a, m) / pochhammer(c, m);
  rhs *= pow_rational(z / (z - 1), static_cast<long>(m));
  rhs *= hyp2f1_exact(HyperSpec(a, b, c + static_cast<long>(m), z));
  return lhs - rhs;
}

/// Exact residual of Bailey's z = 1/2 summation for terminating a; the gamma
/// ratio on the right reduces over Q through gamma_ratio_exact.
inline Rational check_bailey_exact(const Rational& a, const Rational& b) {
  if (!is_nonpositive_integer(a))
    fail(errc::domain, "exact bailey check needs a non-positive integer a");
  Rational lhs = hyp2f1_exact(HyperSpec(a, Rational(1) - a, b, Rational(1, 2)));
  GammaRatioSpec spec;
  spec.num = {b / 2, (b + 1) / 2};
  spec.den = {(a + b) / 2, (Rational(1) - a + b) / 2};
  return lhs - gamma_ratio_exact(spec);
}

/// Bailey residual; exact path for integer a, numeric gamma fallback else.
inline double check_bailey(const Rational& a, const Rational& b, double tol) {
  if (is_nonpositive_integer(a)) {
    try {
      return std::abs(to_double(check_bailey_exact(a, b)));
    } catch (const error& e) {
      if (e.code() != errc::unmatched) throw;
    }
  }
  CDouble lhs = hyp2f1_numeric(HyperSpec(a, Rational(1) - a, b, Rational(1, 2)), tol * 0.01).value;
  auto safe_gamma = [](double x) { return std::tgamma(x); };
  double den1 = to_double((a + b) / 2), den2 = to_double((Rational(1) - a + b) / 2);
  double rhs;
  auto near_pole = [](double x) {
    return x <= 0.0 && std::abs(x - std::round(x)) < 1e-12;
  };
  if (near_pole(den1) || near_pole(den2)) {
    rhs = 0.0;  // reciprocal gamma vanishes at the pole
  } else {
    rhs = safe_gamma(to_double(b / 2)) * safe_gamma(to_double((b + 1) / 2)) /
          (safe_gamma(den1) * safe_gamma(den2));
  }
  return std::abs(lhs - CDouble(rhs, 0.0));
}

}  // namespace dbrk
