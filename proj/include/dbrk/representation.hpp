#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "dbrk/analytic.hpp"
#include "dbrk/kernels.hpp"
#include "dbrk/quadrature.hpp"

namespace dbrk {

/// A kernel f = k_{w,m}^b together with the data needed to evaluate it and
/// its rho-representative g = k_{w,m}^rho. These pairs are the only (f, g)
/// accepted by the representation checks: the correspondence T_conj(b) f =
/// C_rho(g) is a proved identity for them, and reconstructing g from an
/// arbitrary f would need a Hilbert-transform pipeline.
struct KernelPair {
  KernelSpec<CDouble> spec;
  Jet<CDouble> jet;  // jet of b at the base, order >= m
};

inline KernelPair make_kernel_pair(const UnitBallFunction& b, CDouble w, unsigned m,
                                   const QuadratureConfig& cfg = {}) {
  auto spec = interior_spec(w, m);
  return {spec, derivative_jet(b, w, m, cfg)};
}

/// Evaluates the boundary kernel k_{x0,n}^b on the real line with the
/// numerator cancellation under control:
///   - exact-capable b: within |t-x0| < 1e-3 the node is rationalized and the
///     kernel computed in Q(i), so the O((t-x0)^{n+1}) cancellation is free;
///   - otherwise: within a window sized by the b-evaluation noise the kernel
///     is replaced by its Taylor polynomial from the phi jet (error
///     O(|t-x0|^{n+1}));
///   - elsewhere: the direct formula.
/// At t = x0 exactly the removable-singularity value is returned.
class BoundaryKernelEvaluator {
 public:
  BoundaryKernelEvaluator(const UnitBallFunction& b, Rational x0, unsigned n,
                          QuadratureConfig cfg = {})
      : b_(&b), x0_(std::move(x0)), n_(n), cfg_(cfg) {
    x0d_ = to_double(x0_);
    spec_ = boundary_spec(CDouble(x0d_, 0.0), n_);
    jet_ = derivative_jet(b, CDouble(x0d_, 0.0), 2 * n_ + 1, cfg_);
    phi_ = phi_jet(spec_, jet_);
    exact_ = b.exact_capable();
    if (exact_) {
      espec_ = boundary_spec(GaussianRational(x0_), n_);
      ejet_ = derivative_jet(b, GaussianRational(x0_), 2 * n_ + 1);
      ephi_ = phi_jet(*espec_, *ejet_);
      near_window_ = 1e-3;
    } else {
      near_window_ = std::min(1e-2, std::pow(1e-13, 1.0 / (2.0 * (n_ + 1))));
    }
  }

  const Jet<CDouble>& jet() const { return jet_; }
  const Jet<CDouble>& phi() const { return phi_; }
  const KernelSpec<CDouble>& spec() const { return spec_; }
  double x0_double() const { return x0d_; }

  /// k_{x0,n}^b(t); pass the value of b(t) if it is already available.
  CDouble operator()(double t, std::optional<CDouble> b_of_t = std::nullopt) const {
    double d = t - x0d_;
    if (exact_ && std::abs(d) < near_window_) {
      GaussianRational tr(rational_from_double(t));
      GaussianRational k_pi =
          kernel_b_scaled(*b_, *espec_, *ejet_, tr, &*ephi_);
      return to_cdouble(k_pi) / std::numbers::pi;
    }
    if (!exact_ && std::abs(d) < near_window_) return taylor_value(d);
    CDouble bt = b_of_t ? *b_of_t : eval(*b_, CDouble(t, 0.0), cfg_);
    return kernel_b_value_scaled(bt, spec_, jet_, CDouble(t, 0.0), &phi_) / std::numbers::pi;
  }

  /// k_{x0,n}^rho(t); undefined at t = x0 itself.
  CDouble rho_kernel(double t) const {
    return kernel_rho(spec_, jet_, CDouble(t, 0.0));
  }

 private:
  CDouble taylor_value(double d) const {
    // k(t) = (i n!/2pi) sum_{l=n+1}^{2n+1} phi^(l)/l! d^{l-n-1} + O(d^{n+1})
    CDouble acc{};
    double dp = 1.0;
    for (unsigned l = n_ + 1; l <= 2 * n_ + 1; ++l) {
      acc += phi_.deriv(l) / to_double(factorial(l)) * dp;
      dp *= d;
    }
    return CDouble(0.0, to_double(factorial(n_)) / (2.0 * std::numbers::pi)) * acc;
  }

  const UnitBallFunction* b_;
  Rational x0_;
  unsigned n_;
  QuadratureConfig cfg_;
  double x0d_ = 0.0;
  KernelSpec<CDouble> spec_;
  Jet<CDouble> jet_;
  Jet<CDouble> phi_;
  bool exact_ = false;
  double near_window_ = 0.0;
  std::optional<KernelSpec<GaussianRational>> espec_;
  std::optional<Jet<GaussianRational>> ejet_;
  std::optional<Jet<GaussianRational>> ephi_;
};

/// integral of f(t) conj(g(t)) rho(t) dt. rho vanishes off the dip supports,
/// so the integral runs over them only; for inner b it is identically 0.
template <class F, class G>
IntegralResult rho_pairing(F&& f, G&& g, const UnitBallFunction& b,
                           const QuadratureConfig& cfg = {}) {
  IntegralResult total;
  if (b.inner()) return total;
  for (const auto& iv : b.supports()) {
    total += integrate_interval(
        [&](double t) -> CDouble {
          double r = rho(b, t);
          if (r == 0.0) return {};
          return f(t) * std::conj(g(t)) * r;
        },
        iv.lo, iv.hi, cfg);
  }
  return total;
}

struct RepresentationResult {
  CDouble value{};
  double error_estimate = 0.0;
  IntegralResult main;        // integral of f conj(k^b)
  IntegralResult correction;  // integral of g rho conj(k^rho)
};

/// Right-hand side of the interior representation
///   f^(n)(omega) = int f conj(k_{omega,n}^b) + int g rho conj(k_{omega,n}^rho)
/// for f = k_{w,m}^b, evaluated by quadrature. The caller compares against
/// the closed-form derivative.
inline RepresentationResult representation_interior(const UnitBallFunction& b,
                                                    const KernelPair& f, CDouble omega, unsigned n,
                                                    QuadratureConfig cfg = {}) {
  auto spec_w = interior_spec(omega, n);
  Jet<CDouble> jet_w = derivative_jet(b, omega, n, cfg);
  RepresentationResult out;
  cfg.center = omega.real();
  out.main = integrate_real_line(
      [&](double t) -> CDouble {
        CDouble tz(t, 0.0);
        CDouble bt = eval(b, tz, cfg);
        CDouble ft = kernel_b_value_scaled(bt, f.spec, f.jet, tz) / std::numbers::pi;
        CDouble kt = kernel_b_value_scaled(bt, spec_w, jet_w, tz) / std::numbers::pi;
        return ft * std::conj(kt);
      },
      cfg);
  if (!b.inner()) {
    out.correction = rho_pairing(
        [&](double t) { return kernel_rho(f.spec, f.jet, CDouble(t, 0.0)); },
        [&](double t) { return kernel_rho(spec_w, jet_w, CDouble(t, 0.0)); }, b, cfg);
  }
  out.value = out.main.value + out.correction.value;
  out.error_estimate = out.main.error_estimate + out.correction.error_estimate;
  return out;
}

/// Boundary analogue at x0 (which must satisfy the derivative-existence
/// condition); the k^b factor runs through the cancellation-safe evaluator.
inline RepresentationResult representation_boundary(const UnitBallFunction& b,
                                                    const KernelPair& f, const Rational& x0,
                                                    unsigned n, QuadratureConfig cfg = {}) {
  BoundaryKernelEvaluator K(b, x0, n, cfg);
  RepresentationResult out;
  cfg.center = K.x0_double();
  out.main = integrate_real_line(
      [&](double t) -> CDouble {
        CDouble tz(t, 0.0);
        CDouble bt = eval(b, tz, cfg);
        CDouble ft = kernel_b_value_scaled(bt, f.spec, f.jet, tz) / std::numbers::pi;
        return ft * std::conj(K(t, bt));
      },
      cfg);
  if (!b.inner()) {
    out.correction = rho_pairing(
        [&](double t) { return kernel_rho(f.spec, f.jet, CDouble(t, 0.0)); },
        [&](double t) { return K.rho_kernel(t); }, b, cfg);
  }
  out.value = out.main.value + out.correction.value;
  out.error_estimate = out.main.error_estimate + out.correction.error_estimate;
  return out;
}

/// Closed-form f^(q) at the point of z_jet, for f = k_{w,m}^b.
inline CDouble kernel_derivative_closed_form(const KernelPair& f, const Jet<CDouble>& z_jet,
                                             unsigned q) {
  return kernel_b_z_derivative(f.spec, f.jet, z_jet, q);
}

/// L2(R) norm of the boundary kernel, by quadrature of |k|^2 through the
/// cancellation-safe evaluator; the independent check of the norm formula.
inline IntegralResult boundary_norm_l2(const UnitBallFunction& b, const Rational& x0, unsigned n,
                                       QuadratureConfig cfg = {}) {
  BoundaryKernelEvaluator K(b, x0, n, cfg);
  cfg.center = K.x0_double();
  return integrate_real_line(
      [&](double t) -> CDouble {
        CDouble k = K(t);
        return CDouble(std::norm(k), 0.0);
      },
      cfg);
}

}  // namespace dbrk
