#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <complex>
#include <cstdlib>
#include <numbers>
#include <string>

#include "dbrk/gaussian_rational.hpp"
#include "dbrk/rational.hpp"

namespace dbrk {

/// Arbitrary-precision binary float (MPFR backed, runtime precision).
using BigFloat =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                  boost::multiprecision::et_off>;

/// Sets the working precision for BigFloat values created afterwards on this
/// thread. Honors the DBRK_PRECISION_BITS override when bits == 0.
inline unsigned set_precision_bits(unsigned bits = 0) {
  if (bits == 0) {
    if (const char* env = std::getenv("DBRK_PRECISION_BITS")) {
      long v = std::atol(env);
      if (v > 0) bits = static_cast<unsigned>(v);
    }
  }
  if (bits == 0) bits = 256;
  // boost counts precision in decimal digits; round up so >= bits survive.
  unsigned digits10 = static_cast<unsigned>(bits * 0.30103) + 2;
  BigFloat::default_precision(digits10);
  return bits;
}

/// Minimal complex type over an arbitrary real field (std::complex is only
/// specified for builtin floating types).
template <class R>
struct Cplx {
  R re{};
  R im{};

  Cplx() = default;
  Cplx(R r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  Cplx(R r, R i) : re(std::move(r)), im(std::move(i)) {}

  friend Cplx operator+(const Cplx& a, const Cplx& b) { return {a.re + b.re, a.im + b.im}; }
  friend Cplx operator-(const Cplx& a, const Cplx& b) { return {a.re - b.re, a.im - b.im}; }
  friend Cplx operator-(const Cplx& a) { return {-a.re, -a.im}; }
  friend Cplx operator*(const Cplx& a, const Cplx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Cplx operator/(const Cplx& a, const Cplx& b) {
    R n = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  Cplx& operator+=(const Cplx& o) { return *this = *this + o; }
  Cplx& operator-=(const Cplx& o) { return *this = *this - o; }
  Cplx& operator*=(const Cplx& o) { return *this = *this * o; }
  Cplx& operator/=(const Cplx& o) { return *this = *this / o; }
};

template <class R>
Cplx<R> exp(const Cplx<R>& z) {
  using std::exp;
  using std::cos;
  using std::sin;
  R m = exp(z.re);
  return {m * cos(z.im), m * sin(z.im)};
}

using CDouble = std::complex<double>;
using CBig = Cplx<BigFloat>;

/// Uniform scalar interface for the three arithmetic backends the kernel and
/// jet formulas are instantiated with: double complex, MPFR complex, Q(i).
template <class S>
struct field;

template <>
struct field<CDouble> {
  using real_type = double;
  static constexpr bool is_exact = false;
  static CDouble from(const Rational& q) { return {to_double(q), 0.0}; }
  static CDouble from(const BigInt& n) { return {to_double(n), 0.0}; }
  static CDouble from_int(long n) { return {static_cast<double>(n), 0.0}; }
  static CDouble from_real(double x) { return {x, 0.0}; }
  static CDouble i() { return {0.0, 1.0}; }
  static double re(const CDouble& z) { return z.real(); }
  static double im(const CDouble& z) { return z.imag(); }
  static CDouble conj(const CDouble& z) { return std::conj(z); }
  static double abs(const CDouble& z) { return std::abs(z); }
  static double pi() { return std::numbers::pi; }
  static CDouble to_cdouble(const CDouble& z) { return z; }
  static double real_to_double(double x) { return x; }
};

template <>
struct field<CBig> {
  using real_type = BigFloat;
  static constexpr bool is_exact = false;
  static BigFloat real_from(const Rational& q) {
    return BigFloat(numerator(q)) / BigFloat(denominator(q));
  }
  static CBig from(const Rational& q) { return {real_from(q), BigFloat(0)}; }
  static CBig from(const BigInt& n) { return {BigFloat(n), BigFloat(0)}; }
  static CBig from_int(long n) { return {BigFloat(n), BigFloat(0)}; }
  static CBig from_real(const BigFloat& x) { return {x, BigFloat(0)}; }
  static CBig i() { return {BigFloat(0), BigFloat(1)}; }
  static BigFloat re(const CBig& z) { return z.re; }
  static BigFloat im(const CBig& z) { return z.im; }
  static CBig conj(const CBig& z) { return {z.re, -z.im}; }
  static BigFloat abs(const CBig& z) {
    using std::sqrt;
    return sqrt(z.re * z.re + z.im * z.im);
  }
  static BigFloat pi() { return boost::math::constants::pi<BigFloat>(); }
  static CDouble to_cdouble(const CBig& z) {
    return {z.re.convert_to<double>(), z.im.convert_to<double>()};
  }
  static double real_to_double(const BigFloat& x) { return x.convert_to<double>(); }
};

template <>
struct field<GaussianRational> {
  using real_type = Rational;
  static constexpr bool is_exact = true;
  static GaussianRational from(const Rational& q) { return GaussianRational(q); }
  static GaussianRational from(const BigInt& n) { return GaussianRational(Rational(n)); }
  static GaussianRational from_int(long n) { return GaussianRational(Rational(n)); }
  static GaussianRational from_real(const Rational& q) { return GaussianRational(q); }
  static GaussianRational i() { return GaussianRational::i(); }
  static Rational re(const GaussianRational& z) { return z.re; }
  static Rational im(const GaussianRational& z) { return z.im; }
  static GaussianRational conj(const GaussianRational& z) { return dbrk::conj(z); }
  // Diagnostic magnitude only; exact comparisons should use norm_sq.
  static double abs(const GaussianRational& z) { return std::abs(to_cdouble(z)); }
  static CDouble to_cdouble(const GaussianRational& z) { return dbrk::to_cdouble(z); }
  static double real_to_double(const Rational& q) { return dbrk::to_double(q); }
};

template <class S>
S pow_int(S base, long e) {
  if (e < 0) return field<S>::from_int(1) / pow_int(base, -e);
  S acc = field<S>::from_int(1);
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

}  // namespace dbrk
