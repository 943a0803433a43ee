#pragma once

#include <vector>

#include "dbrk/errors.hpp"
#include "dbrk/rational.hpp"

namespace dbrk {

/// Binomial coefficient with the extended convention C(a,b) = 0 for b < 0,
/// b > a or a < 0, which every double sum below relies on.
inline BigInt binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return BigInt(0);
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (long j = 1; j <= k; ++j) {
    r *= (n - k + j);
    r /= j;
  }
  return r;
}

/// Rising factorial (t)_p = t(t+1)...(t+p-1), (t)_0 = 1.
inline Rational pochhammer(const Rational& t, unsigned p) {
  Rational r(1);
  for (unsigned j = 0; j < p; ++j) r *= (t + j);
  return r;
}

/// Partial row sum sum_{i=0}^{n} C(2n+1, i); equals 4^n by row symmetry.
inline BigInt binomial_half_sum(unsigned n) {
  BigInt s = 0;
  for (unsigned i = 0; i <= n; ++i) s += binomial(2L * n + 1, i);
  return s;
}

/// Forward difference power Delta^m f at the left end of the table:
/// sum_k C(m,k)(-1)^{m-k} f(x+k), from m+1 consecutive tabulated values.
inline Rational difference_power(const std::vector<Rational>& values, unsigned m) {
  if (values.size() < m + 1) fail(errc::domain, "difference_power needs m+1 tabulated values");
  Rational acc(0);
  for (unsigned k = 0; k <= m; ++k) {
    BigInt c = binomial(m, k);
    if ((m - k) % 2) c = -c;
    acc += Rational(c) * values[k];
  }
  return acc;
}

inline double difference_power(const std::vector<double>& values, unsigned m) {
  if (values.size() < m + 1) fail(errc::domain, "difference_power needs m+1 tabulated values");
  double acc = 0;
  for (unsigned k = 0; k <= m; ++k) {
    double c = to_double(binomial(m, k));
    acc += ((m - k) % 2 ? -c : c) * values[k];
  }
  return acc;
}

/// The double sum A_{n,r}. Accumulated over rationals (the 2^{p-l} factors
/// carry power-of-two denominators) with an integrality assertion at the end.
inline BigInt anr(unsigned n, unsigned r) {
  if (r > 2 * n + 1) fail(errc::domain, "anr requires r <= 2n+1");
  Rational sum(0);
  for (unsigned p = 0; p <= n; ++p) {
    for (unsigned l = 0; l <= n; ++l) {
      long e = static_cast<long>(p) - static_cast<long>(l);
      Rational term = pow_rational(Rational(-2), e);
      term *= Rational(binomial(r, static_cast<long>(n) - static_cast<long>(l)));
      term *= Rational(binomial(2L * n + 1 - r, p));
      term *= Rational(binomial(static_cast<long>(n) - static_cast<long>(p) + l, l));
      sum += term;
    }
  }
  if ((r + 1) % 2) sum = -sum;
  if (!is_integer(sum)) fail(errc::internal, "anr double sum did not reduce to an integer");
  return numerator(sum);
}

/// Closed form the double sum evaluates to: -2^n for r <= n, +2^n above.
inline BigInt anr_closed(unsigned n, unsigned r) {
  if (r > 2 * n + 1) fail(errc::domain, "anr_closed requires r <= 2n+1");
  BigInt p = 1;
  p <<= n;
  return r <= n ? -p : p;
}

/// The three-index variant A_{n,r,s} from the coefficient-relation analysis.
/// Unlike A_{n,r} it is not integral in general (A_{2,0,4} = 3/2 already),
/// only dyadic: 2^n A_{n,r,s} is an integer, which is what the assertion
/// checks. The exact rational value is returned.
inline Rational anrs(unsigned n, unsigned r, unsigned s) {
  if (r > s || s > 2 * n + 1) fail(errc::domain, "anrs requires 0 <= r <= s <= 2n+1");
  Rational sum(0);
  for (unsigned p = 0; p <= n; ++p) {
    for (unsigned l = 0; l <= n; ++l) {
      long e = static_cast<long>(p) - static_cast<long>(l);
      Rational term = pow_rational(Rational(2), e);
      if ((p + l) % 2) term = -term;
      term *= Rational(binomial(static_cast<long>(n) - static_cast<long>(p) + l, l));
      term *= Rational(binomial(r, static_cast<long>(n) - static_cast<long>(l)));
      term *= Rational(binomial(static_cast<long>(s) - static_cast<long>(r), p));
      sum += term;
    }
  }
  if (r % 2) sum = -sum;
  if (!is_integer(sum * pow_rational(Rational(2), static_cast<long>(n))))
    fail(errc::internal, "2^n * anrs double sum did not reduce to an integer");
  return sum;
}

}  // namespace dbrk
