#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "dbrk/analytic.hpp"
#include "dbrk/kernels.hpp"
#include "dbrk/quadrature.hpp"
#include "dbrk/representation.hpp"

namespace dbrk {

// ---------------------------------------------------------------------------
// Derivative-existence condition
// ---------------------------------------------------------------------------

/// The three terms of the boundary derivative-existence condition at (x0, n):
/// sum_k Im z_k/|x0-z_k|^{2n+2}, the point-mass sum, and the log-modulus
/// integral. Infinities are values, not errors.
struct ConditionReport {
  double blaschke_term = 0.0;
  double singular_term = 0.0;
  double log_term = 0.0;
  double log_term_error = 0.0;  // quadrature error estimate
  double total = 0.0;
  bool finite = true;
  std::optional<double> declared_tail_bound;  // caller-supplied truncation bound, echoed
};

namespace detail {

inline double joint_dip_log_modulus(const UnitBallFunction& b, double t) {
  double lm = 0.0;
  for (const auto& f : b.factors())
    if (const auto* od = std::get_if<OuterDipFactor>(&f)) lm += log_dip_modulus(*od, t);
  return lm;
}

}  // namespace detail

inline ConditionReport ahern_clark_report(const UnitBallFunction& b, const Rational& x0,
                                          unsigned n, const QuadratureConfig& cfg = {},
                                          std::optional<double> declared_tail_bound = {}) {
  ConditionReport rep;
  rep.declared_tail_bound = declared_tail_bound;
  const double inf = std::numeric_limits<double>::infinity();
  const unsigned power = n + 1;  // |x0 - z|^{2n+2} = (|x0 - z|^2)^{n+1}
  Rational blaschke(0), singular(0);
  bool blaschke_inf = false, singular_inf = false;
  for (const auto& f : b.factors()) {
    if (const auto* bl = std::get_if<BlaschkeFactor>(&f)) {
      Rational d2 = (x0 - bl->zero.re) * (x0 - bl->zero.re) + bl->zero.im * bl->zero.im;
      blaschke += bl->zero.im / pow_rational(d2, power);
    } else if (const auto* pm = std::get_if<PointMassFactor>(&f)) {
      if (pm->location == x0) {
        singular_inf = true;
      } else {
        Rational d = x0 - pm->location;
        singular += pm->mass / pow_rational(d * d, power);
      }
    }
  }
  rep.blaschke_term = blaschke_inf ? inf : to_double(blaschke);
  rep.singular_term = singular_inf ? inf : to_double(singular);

  const double x0d = to_double(x0);
  auto supports = b.supports();
  if (supports.empty()) {
    rep.log_term = 0.0;
  } else {
    double m_at = 1.0;
    for (const auto& f : b.factors())
      if (const auto* od = std::get_if<OuterDipFactor>(&f)) m_at *= detail::dip_modulus(*od, x0d);
    if (m_at < 1.0) {
      rep.log_term = inf;  // |log|b|| bounded below near x0 against a non-integrable weight
    } else {
      IntegralResult acc;
      for (const auto& iv : supports) {
        acc += integrate_interval(
            [&](double t) -> CDouble {
              double lm = detail::joint_dip_log_modulus(b, t);
              if (lm == 0.0) return {};
              double w = std::pow((t - x0d) * (t - x0d), static_cast<double>(power));
              return CDouble(-lm / w, 0.0);  // lm <= 0
            },
            iv.lo, iv.hi, cfg);
      }
      rep.log_term = acc.value.real();
      rep.log_term_error = acc.error_estimate;
    }
  }
  rep.finite = std::isfinite(rep.blaschke_term) && std::isfinite(rep.singular_term) &&
               std::isfinite(rep.log_term);
  rep.total = rep.blaschke_term + rep.singular_term + rep.log_term;
  return rep;
}

// ---------------------------------------------------------------------------
// Coefficient identities and the lambda suite
// ---------------------------------------------------------------------------

/// Residuals of | |a_0|^2 - 1 | and |sum_{q<=l} a_{l-q} conj(a_q)| for
/// l = 1..n plus even l in (n, 2n]. Exactly zero on the exact path.
template <class S>
std::vector<std::pair<unsigned, double>> coefficient_identities(const KernelSpec<S>& spec,
                                                                const Jet<S>& jet) {
  if (!spec.boundary) fail(errc::domain, "coefficient identities live at boundary points");
  const unsigned n = spec.n;
  if (jet.order() < 2 * n + 1) fail(errc::domain, "coefficient identities need a jet of order 2n+1");
  std::vector<S> a;
  for (unsigned p = 0; p <= 2 * n + 1; ++p) a.push_back(jet.taylor(p));
  std::vector<std::pair<unsigned, double>> out;
  out.emplace_back(0u, std::abs(field<S>::to_cdouble(
                           field<S>::from_int(1) - a[0] * field<S>::conj(a[0]))));
  auto convolution = [&](unsigned l) {
    S acc = field<S>::from_int(0);
    for (unsigned q = 0; q <= l; ++q) acc += a[l - q] * field<S>::conj(a[q]);
    return acc;
  };
  for (unsigned l = 1; l <= n; ++l)
    out.emplace_back(l, std::abs(field<S>::to_cdouble(convolution(l))));
  for (unsigned l = n + 1; l <= 2 * n; ++l)
    if (l % 2 == 0) out.emplace_back(l, std::abs(field<S>::to_cdouble(convolution(l))));
  return out;
}

template <class S>
struct LambdaSuite {
  std::vector<S> lambda;          // lambda_{s,n}, s = 0..2n+1
  double lambda0_residual = 0;    // |(-1)^n (2n)!/n! - n! lambda_0|
  double mid_max_residual = 0;    // max over 1 <= s <= 2n of |lambda_s|
  double norm_relation_residual = 0;  // lambda_{2n+1} vs the boundary norm
  bool lambda0_exact_ok = false;
  bool mid_exact_ok = false;
  bool norm_exact_ok = false;
};

/// Computes every lambda_{s,n} and the three relations they must satisfy:
/// n! lambda_0 = (-1)^n (2n)!/n!, lambda_s = 0 for 1 <= s <= 2n, and
/// lambda_{2n+1} = (-1)^{n+1} 2^{2n+2} (pi/n!^2) ||k_{x0,n}||^2.
template <class S>
LambdaSuite<S> lambda_suite(const KernelSpec<S>& spec, const Jet<S>& jet) {
  if (!spec.boundary) fail(errc::domain, "lambda suite lives at boundary points");
  const unsigned n = spec.n;
  if (jet.order() < 2 * n + 1) fail(errc::domain, "lambda suite needs a jet of order 2n+1");
  std::vector<S> a;
  for (unsigned p = 0; p <= 2 * n + 1; ++p) a.push_back(jet.taylor(p));
  LambdaSuite<S> out;
  for (unsigned s = 0; s <= 2 * n + 1; ++s) out.lambda.push_back(lambda_coeff(a, s, n));

  S target0 = field<S>::from(factorial(2 * n) / factorial(n));
  if (n % 2) target0 = -target0;
  S resid0 = target0 - field<S>::from(factorial(n)) * out.lambda[0];
  out.lambda0_residual = std::abs(field<S>::to_cdouble(resid0));
  out.lambda0_exact_ok = field<S>::is_exact && out.lambda0_residual == 0.0;

  out.mid_max_residual = 0.0;
  bool mid_ok = true;
  for (unsigned s = 1; s <= 2 * n; ++s) {
    double r = std::abs(field<S>::to_cdouble(out.lambda[s]));
    out.mid_max_residual = std::max(out.mid_max_residual, r);
    mid_ok = mid_ok && r == 0.0;
  }
  out.mid_exact_ok = field<S>::is_exact && mid_ok;

  auto norm = norm_sq_boundary(spec, jet);
  // lambda_{2n+1} = (-1)^{n+1} 2^{2n+2} (pi ||k||^2) / n!^2
  S target = field<S>::from(BigInt(1) << (2 * n + 2)) /
             field<S>::from(factorial(n) * factorial(n)) *
             field<S>::from_real(norm.pi_scaled);
  if (n % 2 == 0) target = -target;
  S resid = out.lambda[2 * n + 1] - target;
  out.norm_relation_residual = std::abs(field<S>::to_cdouble(resid));
  out.norm_exact_ok = field<S>::is_exact && out.norm_relation_residual == 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Norm convergence along the radial approach
// ---------------------------------------------------------------------------

struct ConvergenceRow {
  Rational t;
  double interior_norm_sq = 0.0;
  double diff_norm_sq = 0.0;
  double cancellation_bits = 0.0;
  std::optional<Rational> interior_pi;  // exact path: pi * value
  std::optional<Rational> diff_pi;
};

struct ConvergenceTrace {
  std::vector<ConvergenceRow> rows;
  double boundary_norm_sq = 0.0;
  std::optional<Rational> boundary_pi;
};

/// ||k_{x0+it,n}||^2 and ||k_{x0+it,n} - k_{x0,n}||^2 along the schedule.
/// The cross term comes from the boundary reproducing identity applied to
/// f = k_{omega,n}^b: <k_omega, k_x0>_b = (k_{omega,n}^b)^(n)(x0).
template <class S>
ConvergenceTrace norm_convergence_trace(const UnitBallFunction& b, const Rational& x0, unsigned n,
                                        const std::vector<Rational>& t_schedule,
                                        const QuadratureConfig& cfg = {}) {
  for (std::size_t i = 0; i + 1 < t_schedule.size(); ++i)
    if (!(t_schedule[i + 1] < t_schedule[i]))
      fail(errc::domain, "t schedule must be strictly decreasing");
  for (const auto& t : t_schedule)
    if (!(t > 0)) fail(errc::domain, "t schedule must be positive");

  const S x0s = field<S>::from(x0);
  auto bspec = boundary_spec(x0s, n);
  Jet<S> bjet = [&] {
    if constexpr (field<S>::is_exact) {
      return derivative_jet(b, x0s, 2 * n + 1);
    } else {
      return derivative_jet(b, x0s, 2 * n + 1, cfg);
    }
  }();
  auto bnorm = norm_sq_boundary(bspec, bjet);
  Jet<S> zjet = [&] {  // jet of b at x0 of order n, for the cross term
    if constexpr (field<S>::is_exact) {
      return derivative_jet(b, x0s, n);
    } else {
      return derivative_jet(b, x0s, n, cfg);
    }
  }();

  ConvergenceTrace trace;
  trace.boundary_norm_sq = bnorm.value();
  if constexpr (field<S>::is_exact) trace.boundary_pi = bnorm.pi_scaled;

  for (const auto& t : t_schedule) {
    S omega = x0s + field<S>::i() * field<S>::from(t);
    auto ispec = interior_spec(omega, n);
    Jet<S> ijet = derivative_jet(b, omega, n, cfg);
    auto inorm = norm_sq_interior(ispec, ijet);
    S cross_pi = kernel_b_z_derivative_scaled(ispec, ijet, zjet, n);
    auto diff_pi = inorm.pi_scaled - 2 * field<S>::re(cross_pi) + bnorm.pi_scaled;

    ConvergenceRow row;
    row.t = t;
    row.interior_norm_sq = inorm.value();
    row.diff_norm_sq = field<S>::real_to_double(diff_pi) / std::numbers::pi;
    row.cancellation_bits = inorm.cancellation_bits;
    if constexpr (field<S>::is_exact) {
      if (diff_pi < 0) fail(errc::internal, "exact difference norm came out negative");
      row.interior_pi = inorm.pi_scaled;
      row.diff_pi = diff_pi;
    }
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Probes (report-only)
// ---------------------------------------------------------------------------

/// The open-question sums sum_{r=0}^s a_r conj(a_{s-r}) for odd s in (n, 2n],
/// reported without any assertion.
template <class S>
std::vector<std::pair<unsigned, CDouble>> odd_s_probe(const KernelSpec<S>& spec,
                                                      const Jet<S>& jet) {
  if (!spec.boundary) fail(errc::domain, "odd-s probe lives at boundary points");
  const unsigned n = spec.n;
  if (jet.order() < 2 * n) fail(errc::domain, "odd-s probe needs a jet of order 2n");
  std::vector<S> a;
  for (unsigned p = 0; p <= 2 * n; ++p) a.push_back(jet.taylor(p));
  std::vector<std::pair<unsigned, CDouble>> out;
  for (unsigned s = n + 1; s <= 2 * n; ++s) {
    if (s % 2 == 0) continue;
    S acc = field<S>::from_int(0);
    for (unsigned r = 0; r <= s; ++r) acc += a[r] * field<S>::conj(a[s - r]);
    out.emplace_back(s, field<S>::to_cdouble(acc));
  }
  return out;
}

struct RemainderRow {
  double t;
  double abs_epsilon;
};

/// Tabulates eps(x0+it) = (b(x0+it) - Taylor_n(x0+it)) / (it)^n along the
/// schedule; under the condition it must tend to 0.
inline std::vector<RemainderRow> taylor_remainder_check(const UnitBallFunction& b,
                                                        const Rational& x0, unsigned n,
                                                        const std::vector<Rational>& t_schedule,
                                                        const QuadratureConfig& cfg = {}) {
  const double x0d = to_double(x0);
  Jet<CDouble> jet = derivative_jet(b, CDouble(x0d, 0.0), n, cfg);
  std::vector<RemainderRow> rows;
  for (const auto& t : t_schedule) {
    double td = to_double(t);
    CDouble omega(x0d, td);
    CDouble taylor{};
    CDouble dz(0.0, td);
    CDouble dp(1.0, 0.0);
    for (unsigned p = 0; p <= n; ++p) {
      taylor += jet.taylor(p) * dp;
      dp *= dz;
    }
    CDouble eps = (eval(b, omega, cfg) - taylor) / pow_int(dz, static_cast<long>(n));
    rows.push_back({td, std::abs(eps)});
  }
  return rows;
}

}  // namespace dbrk
