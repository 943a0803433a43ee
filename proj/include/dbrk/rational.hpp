#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "dbrk/errors.hpp"

namespace dbrk {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

/// True when q is 0, -1, -2, ... (a pole of the gamma function).
inline bool is_nonpositive_integer(const Rational& q) { return is_integer(q) && q <= 0; }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(const BigInt& n) { return n.convert_to<double>(); }

inline BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned k = 2; k <= n; ++k) r *= k;
  return r;
}

/// q^e for integer e (negative exponents allowed, q != 0 then).
inline Rational pow_rational(const Rational& q, long e) {
  if (e == 0) return Rational(1);
  bool inv = e < 0;
  unsigned long k = inv ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  Rational acc(1), base = q;
  while (k) {
    if (k & 1) acc *= base;
    base *= base;
    k >>= 1;
  }
  if (inv) {
    if (acc == 0) fail(errc::domain, "0 cannot be raised to a negative power");
    acc = Rational(1) / acc;
  }
  return acc;
}

/// Exact rational value of a finite double (every finite double is p/2^k).
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) fail(errc::domain, "cannot rationalize a non-finite double");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  double m = std::frexp(x, &exp);  // x = m * 2^exp, 0.5 <= |m| < 1
  auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  exp -= 53;
  Rational r(mant);
  if (exp >= 0) {
    r *= pow_rational(Rational(2), exp);
  } else {
    r /= pow_rational(Rational(2), -exp);
  }
  return r;
}

/// Parses "p/q", plain integers, or decimal strings ("-1.25", "3e-2") into an
/// exact rational. Decimal inputs convert exactly (base-10 mantissa over a
/// power of ten), so configuration files round-trip without float noise.
inline Rational parse_rational(std::string_view s) {
  auto bad = [&] { fail(errc::parse, "invalid rational literal '" + std::string(s) + "'"); };
  // cpp_int's string constructor treats a leading 0 as an octal prefix
  auto parse_int = [&](std::string t) -> BigInt {
    bool neg = false;
    std::size_t k = 0;
    if (k < t.size() && (t[k] == '+' || t[k] == '-')) neg = (t[k++] == '-');
    while (k + 1 < t.size() && t[k] == '0') ++k;
    std::string digits = t.substr(k);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) bad();
    BigInt v(digits);
    return neg ? -v : v;
  };
  if (s.empty()) bad();
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string num(s.substr(0, slash)), den(s.substr(slash + 1));
    if (num.empty() || den.empty()) bad();
    BigInt n = parse_int(num), d = parse_int(den);
    if (d == 0) bad();
    return Rational(n, d);
  }
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = (s[i++] == '-');
  std::string digits;
  long frac_digits = 0;
  bool seen_digit = false, seen_dot = false;
  for (; i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'); ++i) {
    if (s[i] == '.') {
      if (seen_dot) bad();
      seen_dot = true;
    } else {
      digits.push_back(s[i]);
      if (seen_dot) ++frac_digits;
      seen_digit = true;
    }
  }
  if (!seen_digit) bad();
  long exp10 = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = (s[i++] == '-');
    if (i >= s.size()) bad();
    long e = 0;
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) bad();
      e = e * 10 + (s[i] - '0');
      if (e > 100000) bad();
    }
    exp10 = eneg ? -e : e;
  }
  if (i != s.size()) bad();
  std::size_t nz = 0;
  while (nz + 1 < digits.size() && digits[nz] == '0') ++nz;
  Rational r{BigInt(digits.substr(nz))};
  long net = exp10 - frac_digits;
  if (net >= 0) {
    r *= pow_rational(Rational(10), net);
  } else {
    r /= pow_rational(Rational(10), -net);
  }
  return neg ? -r : r;
}

/// "p/q" (or plain "p" when integral); the CSV/JSON wire form for exact values.
inline std::string rational_to_string(const Rational& q) {
  std::string s = numerator(q).convert_to<std::string>();
  if (!is_integer(q)) {
    s += '/';
    s += denominator(q).convert_to<std::string>();
  }
  return s;
}

}  // namespace dbrk
