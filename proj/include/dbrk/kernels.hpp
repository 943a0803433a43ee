#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "dbrk/analytic.hpp"
#include "dbrk/combinatorics.hpp"
#include "dbrk/errors.hpp"
#include "dbrk/field.hpp"

namespace dbrk {

/// Identifies a derivative-evaluation kernel: base point (interior omega or
/// boundary x0) and derivative order n.
template <class S>
struct KernelSpec {
  S base{};
  unsigned n = 0;
  bool boundary = false;
};

template <class S>
KernelSpec<S> interior_spec(const S& omega, unsigned n) {
  if (!(field<S>::im(omega) > 0)) fail(errc::domain, "interior base point needs Im > 0");
  return {omega, n, false};
}

template <class S>
KernelSpec<S> boundary_spec(const S& x0, unsigned n) {
  if (!(field<S>::im(x0) == 0)) fail(errc::domain, "boundary base point must be real");
  return {x0, n, true};
}

// ---------------------------------------------------------------------------
// Every kernel-level quantity below carries an i/(2 pi) prefactor. The
// *_scaled functions return pi times the true value, which keeps the exact
// Q(i) path rational; the unscaled wrappers divide pi back out and exist for
// the floating instantiations only.
// ---------------------------------------------------------------------------

namespace detail {

template <class S>
S i_halved(unsigned n) {  // i n!/2, the scaled kernel prefactor
  return field<S>::i() * field<S>::from(factorial(n)) / field<S>::from_int(2);
}

inline BigInt falling(long e, unsigned l) {
  BigInt r = 1;
  for (unsigned j = 0; j < l; ++j) r *= (e - static_cast<long>(j));
  return r;
}

inline BigInt poch_int(long t, unsigned p) {
  BigInt r = 1;
  for (unsigned j = 0; j < p; ++j) r *= (t + static_cast<long>(j));
  return r;
}

template <class S>
bool scalar_eq(const S& a, const S& b) {
  return field<S>::re(a) == field<S>::re(b) && field<S>::im(a) == field<S>::im(b);
}

}  // namespace detail

/// Jet of phi(z) = 1 - b(z) sum_{p<=n} conj(a_p) (z-x0)^p at x0, of order
/// 2n+1: phi(x0) = 1 - |a_0|^2 and phi^(l) = -l! sum_{p<=min(l,n)} conj(a_p)
/// a_{l-p}. Under the derivative-existence condition the entries 0..n vanish.
template <class S>
Jet<S> phi_jet(const KernelSpec<S>& spec, const Jet<S>& base_jet) {
  if (!spec.boundary) fail(errc::domain, "phi jet is defined at boundary base points");
  const unsigned n = spec.n;
  if (base_jet.order() < 2 * n + 1)
    fail(errc::domain, "phi jet needs a base jet of order 2n+1");
  std::vector<S> a;
  a.reserve(2 * n + 2);
  for (unsigned p = 0; p <= 2 * n + 1; ++p) a.push_back(base_jet.taylor(p));
  std::vector<S> v(2 * n + 2, field<S>::from_int(0));
  v[0] = field<S>::from_int(1) - field<S>::conj(a[0]) * a[0];
  for (unsigned l = 1; l <= 2 * n + 1; ++l) {
    S acc = field<S>::from_int(0);
    for (unsigned p = 0; p <= std::min(l, n); ++p) acc += field<S>::conj(a[p]) * a[l - p];
    v[l] = -field<S>::from(factorial(l)) * acc;
  }
  return Jet<S>{spec.base, std::move(v)};
}

/// pi * k_{base,n}^b(z) given the value of b at z. At the boundary base point
/// itself the kernel is the removable-singularity limit taken from the phi
/// jet: pi k(x0) = (i n!/2) phi^(n+1)(x0) / (n+1)!.
template <class S>
S kernel_b_value_scaled(const S& b_of_z, const KernelSpec<S>& spec, const Jet<S>& base_jet,
                        const S& z, const Jet<S>* phi = nullptr) {
  const unsigned n = spec.n;
  const S beta = spec.boundary ? spec.base : field<S>::conj(spec.base);
  if (detail::scalar_eq(z, beta)) {
    if (!spec.boundary || !phi)
      fail(errc::singular_point, "kernel evaluation at the conjugate base point");
    return detail::i_halved<S>(n) * phi->deriv(n + 1) / field<S>::from(factorial(n + 1));
  }
  S dz = z - beta;
  S poly = field<S>::from_int(0);
  S zp = field<S>::from_int(1);
  for (unsigned p = 0; p <= n; ++p) {
    poly += field<S>::conj(base_jet.taylor(p)) * zp;
    zp *= dz;
  }
  S core = (field<S>::from_int(1) - b_of_z * poly) / pow_int(dz, static_cast<long>(n) + 1);
  return detail::i_halved<S>(n) * core;
}

template <class S>
S kernel_b_scaled(const UnitBallFunction& b, const KernelSpec<S>& spec, const Jet<S>& base_jet,
                  const S& z, const Jet<S>* phi = nullptr, const QuadratureConfig& cfg = {}) {
  const S beta = spec.boundary ? spec.base : field<S>::conj(spec.base);
  if (spec.boundary && detail::scalar_eq(z, beta))
    return kernel_b_value_scaled(field<S>::from_int(0), spec, base_jet, z, phi);
  return kernel_b_value_scaled(eval(b, z, cfg), spec, base_jet, z, phi);
}

/// pi * k_{base,n}^rho(t): the companion kernel entering through the weight
/// rho = 1 - |b|^2. Defined off the boundary base point.
template <class S>
S kernel_rho_scaled(const KernelSpec<S>& spec, const Jet<S>& base_jet, const S& t) {
  const unsigned n = spec.n;
  const S beta = spec.boundary ? spec.base : field<S>::conj(spec.base);
  if (detail::scalar_eq(t, beta))
    fail(errc::singular_point, "rho-kernel is undefined at the boundary base point");
  S dz = t - beta;
  S poly = field<S>::from_int(0);
  S zp = field<S>::from_int(1);
  for (unsigned p = 0; p <= n; ++p) {
    poly += field<S>::conj(base_jet.taylor(p)) * zp;
    zp *= dz;
  }
  return detail::i_halved<S>(n) * poly / pow_int(dz, static_cast<long>(n) + 1);
}

/// pi * (d/dz)^q k_{base,n}^b at z_jet.base, by termwise differentiation:
/// the (z-beta)^{-n-1} piece gives (-1)^q (n+1)_q (z-beta)^{-n-1-q}, and the
/// b(z)(z-beta)^{p-n-1} pieces expand by the Leibniz rule against the jet of
/// b at z. Needs that jet to order q.
template <class S>
S kernel_b_z_derivative_scaled(const KernelSpec<S>& spec, const Jet<S>& base_jet,
                               const Jet<S>& z_jet, unsigned q) {
  const unsigned n = spec.n;
  const S beta = spec.boundary ? spec.base : field<S>::conj(spec.base);
  const S z = z_jet.base;
  if (detail::scalar_eq(z, beta))
    fail(errc::singular_point, "kernel derivative at the conjugate base point");
  S dz = z - beta;
  S lead = field<S>::from(detail::poch_int(static_cast<long>(n) + 1, q)) /
           pow_int(dz, static_cast<long>(n) + 1 + static_cast<long>(q));
  if (q % 2) lead = -lead;
  S sum = field<S>::from_int(0);
  for (unsigned p = 0; p <= n; ++p) {
    S ap = field<S>::conj(base_jet.taylor(p));
    S inner = field<S>::from_int(0);
    for (unsigned l = 0; l <= q; ++l) {
      long e = static_cast<long>(p) - static_cast<long>(n) - 1;
      S term = field<S>::from(binomial(q, l)) * z_jet.deriv(q - l) *
               field<S>::from(detail::falling(e, l)) *
               pow_int(dz, e - static_cast<long>(l));
      inner += term;
    }
    sum += ap * inner;
  }
  return detail::i_halved<S>(n) * (lead - sum);
}

/// h_{x0,n}(z) = (b(z) - sum_{p<=n} a_p (z-x0)^p) / (z-x0)^{n+1}; carries no
/// pi factor. Satisfies h = 2 i pi sum_p a_{n-p}/p! k_{x0,p}^b.
template <class S>
S h_function_value(const S& b_of_z, const KernelSpec<S>& spec, const Jet<S>& base_jet, const S& z) {
  if (!spec.boundary) fail(errc::domain, "h is defined for boundary base points");
  const unsigned n = spec.n;
  if (detail::scalar_eq(z, spec.base)) fail(errc::singular_point, "h is undefined at x0");
  S dz = z - spec.base;
  S poly = field<S>::from_int(0);
  S zp = field<S>::from_int(1);
  for (unsigned p = 0; p <= n; ++p) {
    poly += base_jet.taylor(p) * zp;
    zp *= dz;
  }
  return (b_of_z - poly) / pow_int(dz, static_cast<long>(n) + 1);
}

template <class S>
S h_function(const UnitBallFunction& b, const KernelSpec<S>& spec, const Jet<S>& base_jet,
             const S& z, const QuadratureConfig& cfg = {}) {
  return h_function_value(eval(b, z, cfg), spec, base_jet, z);
}

// ---------------------------------------------------------------------------
// Squared norms
// ---------------------------------------------------------------------------

template <class S>
struct NormSq {
  typename field<S>::real_type pi_scaled{};  // pi * ||k||^2
  double cancellation_bits = 0.0;            // achieved cancellation (floating paths)

  double value() const {
    return field<S>::real_to_double(pi_scaled) / std::numbers::pi;
  }
};

/// ||k_{x0,n}^b||^2 from the boundary derivative sum
///   n!^2/(2 i pi) sum_{p=0}^n conj(a_p) a_{2n+1-p},
/// as the pi-scaled real part. The expression is analytically real and
/// non-negative; violations beyond tol signal jet inaccuracy.
template <class S>
NormSq<S> norm_sq_boundary(const KernelSpec<S>& spec, const Jet<S>& base_jet, double tol = 1e-9) {
  if (!spec.boundary) fail(errc::domain, "boundary norm formula needs a boundary base");
  const unsigned n = spec.n;
  if (base_jet.order() < 2 * n + 1)
    fail(errc::domain, "boundary norm needs a jet of order 2n+1");
  S t_sum = field<S>::from_int(0);
  for (unsigned p = 0; p <= n; ++p)
    t_sum += field<S>::conj(base_jet.taylor(p)) * base_jet.taylor(2 * n + 1 - p);
  // pi ||k||^2 = n!^2/(2i) T  =>  real part n!^2 Im(T)/2, residual Re(T)
  auto nf2 = field<S>::from(factorial(n) * factorial(n));
  auto re_t = field<S>::re(t_sum);
  auto im_t = field<S>::im(t_sum);
  NormSq<S> out;
  out.pi_scaled = field<S>::re(nf2) * im_t / 2;
  if constexpr (field<S>::is_exact) {
    if (re_t != 0) fail(errc::large_imaginary, "exact boundary norm has nonzero imaginary part");
    if (out.pi_scaled < 0) fail(errc::negative_norm, "exact boundary norm is negative");
  } else {
    using std::abs;
    auto scale = abs(re_t) + abs(im_t) + 1;
    if (!(abs(re_t) <= tol * scale))
      fail(errc::large_imaginary, "boundary norm imaginary part exceeds tolerance");
    if (!(out.pi_scaled >= -tol * field<S>::re(nf2) * scale))
      fail(errc::negative_norm, "boundary norm evaluated negative");
  }
  return out;
}

/// ||k_{omega,n}^b||^2 = (k_{omega,n}^b)^(n)(omega), written out as the
/// explicit bracket over (omega - conj omega)^{2n+1}. The bracket cancels to
/// O((Im omega)^{2n+1}) near the boundary; the achieved cancellation is
/// measured and checked against the arithmetic's precision budget.
template <class S>
NormSq<S> norm_sq_interior(const KernelSpec<S>& spec, const Jet<S>& base_jet, double tol = 1e-9) {
  if (spec.boundary) fail(errc::domain, "interior norm formula needs an interior base");
  const unsigned n = spec.n;
  const S omega = spec.base;
  const S two_i_im = omega - field<S>::conj(omega);
  S bracket = field<S>::from(factorial(2 * n) / factorial(n));
  if (n % 2) bracket = -bracket;
  double max_term = field<S>::is_exact ? 0.0 : field<S>::real_to_double(field<S>::abs(bracket));
  for (unsigned p = 0; p <= n; ++p) {
    S ap = field<S>::conj(base_jet.taylor(p));
    for (unsigned l = 0; l <= n; ++l) {
      S term = field<S>::from(binomial(n, l) * (factorial(n - p + l) / factorial(n - p)));
      if (l % 2) term = -term;
      term *= pow_int(two_i_im, static_cast<long>(n + p) - static_cast<long>(l));
      term *= ap * base_jet.deriv(n - l);
      bracket -= term;
      if constexpr (!field<S>::is_exact)
        max_term = std::max(max_term, field<S>::real_to_double(field<S>::abs(term)));
    }
  }
  S value = detail::i_halved<S>(n) * bracket / pow_int(two_i_im, 2 * static_cast<long>(n) + 1);
  NormSq<S> out;
  out.pi_scaled = field<S>::re(value);
  auto im_v = field<S>::im(value);
  if constexpr (field<S>::is_exact) {
    if (im_v != 0) fail(errc::large_imaginary, "exact interior norm has nonzero imaginary part");
    if (out.pi_scaled < 0) fail(errc::negative_norm, "exact interior norm is negative");
  } else {
    double bits = 0.0;
    double bmag = field<S>::real_to_double(field<S>::abs(bracket));
    if (max_term > 0 && bmag > 0) bits = std::log2(max_term / bmag);
    if (bmag == 0.0 && max_term > 0) bits = 1024.0;
    out.cancellation_bits = std::max(0.0, bits);
    double budget;
    if constexpr (std::is_same_v<S, CDouble>) {
      budget = 53.0;
    } else {
      budget = static_cast<double>(BigFloat::default_precision()) / 0.30103;
    }
    if (out.cancellation_bits > budget - 12.0)
      fail(errc::cancellation,
           "interior norm cancellation (" + std::to_string(out.cancellation_bits) +
               " bits) exceeds the precision budget; raise DBRK_PRECISION_BITS");
    using std::abs;
    auto scale = abs(out.pi_scaled) + abs(im_v) + 1;
    if (!(abs(im_v) <= tol * scale))
      fail(errc::large_imaginary, "interior norm imaginary part exceeds tolerance");
    if (!(out.pi_scaled >= -tol * scale))
      fail(errc::negative_norm, "interior norm evaluated negative");
  }
  return out;
}

/// lambda_{s,n}: the coefficient of t^s in the near-boundary expansion of the
/// interior norm, as the triple sum over the Taylor coefficients a_0..a_s.
template <class S>
S lambda_coeff(const std::vector<S>& a, unsigned s, unsigned n) {
  if (a.size() < s + 1) fail(errc::domain, "lambda_coeff needs Taylor coefficients up to a_s");
  S total = field<S>::from_int(0);
  for (unsigned p = 0; p <= n; ++p) {
    for (unsigned l = 0; l <= n; ++l) {
      BigInt outer = binomial(static_cast<long>(n) - p + l, l);
      if (outer == 0) continue;
      BigInt w = outer * (BigInt(1) << (n + p - l));
      S inner = field<S>::from_int(0);
      for (unsigned r = 0; r <= s; ++r) {
        BigInt c = binomial(r, static_cast<long>(n) - l) * binomial(s - r, p);
        if (c == 0) continue;
        S term = field<S>::from(c) * a[r] * field<S>::conj(a[s - r]);
        if ((s - r) % 2) term = -term;
        inner += term;
      }
      S contrib = field<S>::from(w) * inner;
      if ((p + l) % 2) contrib = -contrib;
      total += contrib;
    }
  }
  return pow_int(field<S>::i(), static_cast<long>(s)) * total;
}

// Floating-friendly wrappers that divide the pi back out.

template <class S>
S kernel_b(const UnitBallFunction& b, const KernelSpec<S>& spec, const Jet<S>& base_jet, const S& z,
           const Jet<S>* phi = nullptr, const QuadratureConfig& cfg = {}) {
  static_assert(!field<S>::is_exact, "the exact path works with pi-scaled kernels");
  return kernel_b_scaled(b, spec, base_jet, z, phi, cfg) / field<S>::from_real(field<S>::pi());
}

template <class S>
S kernel_rho(const KernelSpec<S>& spec, const Jet<S>& base_jet, const S& t) {
  static_assert(!field<S>::is_exact, "the exact path works with pi-scaled kernels");
  return kernel_rho_scaled(spec, base_jet, t) / field<S>::from_real(field<S>::pi());
}

template <class S>
S kernel_b_z_derivative(const KernelSpec<S>& spec, const Jet<S>& base_jet, const Jet<S>& z_jet,
                        unsigned q) {
  static_assert(!field<S>::is_exact, "the exact path works with pi-scaled kernels");
  return kernel_b_z_derivative_scaled(spec, base_jet, z_jet, q) /
         field<S>::from_real(field<S>::pi());
}

}  // namespace dbrk
