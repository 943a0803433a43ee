#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "dbrk/combinatorics.hpp"
#include "dbrk/errors.hpp"
#include "dbrk/field.hpp"
#include "dbrk/gaussian_rational.hpp"
#include "dbrk/quadrature.hpp"
#include "dbrk/rational.hpp"

namespace dbrk {

// ---------------------------------------------------------------------------
// Factor kinds of the canonical factorization, restricted to finitely
// describable data: finite Blaschke products, finite sums of boundary point
// masses, the e^{iaz} factor, and outer factors with a smooth-dip modulus.
// ---------------------------------------------------------------------------

struct BlaschkeFactor {
  GaussianRational zero;  // z_k, Im z_k > 0
  Rational phase{0};      // alpha_k in radians; exact arithmetic needs 0
};

struct PointMassFactor {
  Rational location;  // t_0
  Rational mass;      // sigma > 0
};

struct ExpInfinityFactor {
  Rational coefficient;  // a >= 0, factor z -> e^{iaz}
};

struct Dip {
  Rational center;
  Rational half_width;  // > 0
  Rational depth;       // in (0,1)
};

/// Outer factor with boundary modulus m(t) = prod (1 - s * bump((t-c)/w)),
/// bump(u) = exp(-1/(1-u^2)) on |u| < 1. m is smooth, equals 1 off the dip
/// supports, and stays in (0,1], so log m is smooth with compact support.
struct OuterDipFactor {
  std::vector<Dip> dips;
};

using Factor = std::variant<BlaschkeFactor, PointMassFactor, ExpInfinityFactor, OuterDipFactor>;

struct Interval {
  double lo, hi;
};

namespace detail {

inline double bump(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

inline double dip_modulus(const OuterDipFactor& f, double t) {
  double m = 1.0;
  for (const auto& d : f.dips) {
    double u = (t - to_double(d.center)) / to_double(d.half_width);
    m *= 1.0 - to_double(d.depth) * bump(u);
  }
  return m;
}

inline std::vector<Interval> merged_intervals(std::vector<Interval> iv) {
  std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  for (const auto& s : iv) {
    if (!out.empty() && s.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, s.hi);
    } else {
      out.push_back(s);
    }
  }
  return out;
}

inline std::vector<Interval> factor_supports(const OuterDipFactor& f) {
  std::vector<Interval> iv;
  iv.reserve(f.dips.size());
  for (const auto& d : f.dips) {
    double c = to_double(d.center), w = to_double(d.half_width);
    iv.push_back({c - w, c + w});
  }
  return merged_intervals(std::move(iv));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// UnitBallFunction: an element of the unit ball of H^infinity(C_+) given as
// an ordered factor product times a unimodular constant.
// ---------------------------------------------------------------------------

class UnitBallFunction {
 public:
  UnitBallFunction() = default;

  explicit UnitBallFunction(std::vector<Factor> factors, Rational global_phase = Rational(0))
      : factors_(std::move(factors)), global_phase_(std::move(global_phase)) {
    validate();
  }

  const std::vector<Factor>& factors() const { return factors_; }
  const Rational& global_phase() const { return global_phase_; }

  /// No outer factor => |b| = 1 a.e. on R (rho vanishes identically).
  bool inner() const {
    for (const auto& f : factors_)
      if (std::holds_alternative<OuterDipFactor>(f)) return false;
    return true;
  }

  /// Exact Q(i) arithmetic applies to phase-free finite Blaschke products.
  bool exact_capable() const {
    if (global_phase_ != 0) return false;
    for (const auto& f : factors_) {
      const auto* bl = std::get_if<BlaschkeFactor>(&f);
      if (!bl || bl->phase != 0) return false;
    }
    return true;
  }

  /// Union of the dip supports (the set where rho can be nonzero).
  std::vector<Interval> supports() const {
    std::vector<Interval> iv;
    for (const auto& f : factors_) {
      if (const auto* od = std::get_if<OuterDipFactor>(&f)) {
        auto s = detail::factor_supports(*od);
        iv.insert(iv.end(), s.begin(), s.end());
      }
    }
    return detail::merged_intervals(std::move(iv));
  }

  /// Boundary modulus |b(t)| (exact formula, no quadrature): 1 on R except
  /// across dip supports, undefined only at point-mass locations.
  double boundary_modulus(double t) const {
    double m = 1.0;
    for (const auto& f : factors_) {
      if (const auto* pm = std::get_if<PointMassFactor>(&f)) {
        if (t == to_double(pm->location))
          fail(errc::singular_point, "b is undefined at a point-mass location");
      } else if (const auto* od = std::get_if<OuterDipFactor>(&f)) {
        m *= detail::dip_modulus(*od, t);
      }
    }
    return m;
  }

 private:
  void validate() const {
    for (const auto& f : factors_) {
      if (const auto* bl = std::get_if<BlaschkeFactor>(&f)) {
        if (!(bl->zero.im > 0)) fail(errc::domain, "Blaschke zero must lie in the open upper half plane");
      } else if (const auto* pm = std::get_if<PointMassFactor>(&f)) {
        if (!(pm->mass > 0)) fail(errc::domain, "point mass must be positive");
      } else if (const auto* ei = std::get_if<ExpInfinityFactor>(&f)) {
        if (ei->coefficient < 0) fail(errc::domain, "e^{iaz} needs a >= 0");
      } else if (const auto* od = std::get_if<OuterDipFactor>(&f)) {
        for (const auto& d : od->dips) {
          if (!(d.half_width > 0)) fail(errc::domain, "dip half-width must be positive");
          if (!(d.depth > 0 && d.depth < 1)) fail(errc::domain, "dip depth must be in (0,1)");
        }
      }
    }
  }

  std::vector<Factor> factors_;
  Rational global_phase_{0};
};

/// rho(t) = 1 - |b(t)|^2, in [0,1]; identically 0 for inner b.
inline double rho(const UnitBallFunction& b, double t) {
  double m = b.boundary_modulus(t);
  return 1.0 - m * m;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace detail {

template <class S>
S gaussian_to_scalar(const GaussianRational& g) {
  if constexpr (std::is_same_v<S, GaussianRational>) {
    return g;
  } else {
    return field<S>::from(g.re) + field<S>::i() * field<S>::from(g.im);
  }
}

template <class S>
S phase_unit(const Rational& alpha) {
  if (alpha == 0) return field<S>::from_int(1);
  if constexpr (field<S>::is_exact) {
    fail(errc::exact_unsupported, "nonzero phases are not representable in Q(i)");
  } else {
    using R = typename field<S>::real_type;
    using std::cos;
    using std::sin;
    R a = field<S>::re(field<S>::from(alpha));
    return S{cos(a), sin(a)};
  }
}

template <class S>
bool is_real_point(const S& z) {
  return field<S>::im(z) == 0;
}

// log of the point-mass factor: L(z) = (i sigma/pi) (1/(t0 - z) - t0/(t0^2+1)).
template <class S>
S point_mass_log(const PointMassFactor& f, const S& z) {
  S t0 = field<S>::from(f.location);
  S sigma = field<S>::from(f.mass);
  S one = field<S>::from_int(1);
  S pi = field<S>::from_real(field<S>::pi());
  return field<S>::i() * sigma / pi * (one / (t0 - z) - t0 / (t0 * t0 + one));
}

// j-th derivative of the point-mass log, j >= 1: (i sigma/pi) j!/(t0-z)^{j+1}.
template <class S>
S point_mass_log_deriv(const PointMassFactor& f, const S& z, unsigned j) {
  S t0 = field<S>::from(f.location);
  S pi = field<S>::from_real(field<S>::pi());
  S c = field<S>::i() * field<S>::from(f.mass) / pi * field<S>::from(factorial(j));
  return c / pow_int(t0 - z, static_cast<long>(j) + 1);
}

inline void require_off_point_mass(const PointMassFactor& f, double re_z, bool real_axis) {
  if (real_axis && re_z == to_double(f.location))
    fail(errc::singular_point, "evaluation at a point-mass location");
}

// log m and its supports for one outer factor
inline double log_dip_modulus(const OuterDipFactor& f, double t) {
  double m = dip_modulus(f, t);
  return std::log(m);
}

// Cauchy-type integrals of log m for the outer factor. For Im z > 0 the
// integrand is smooth; for real z the 1/(t-z) part is taken in the principal
// value sense by symmetric-window singularity subtraction (log m is smooth on
// all of R, so the subtracted quotient is smooth too).
inline CDouble outer_log(const OuterDipFactor& f, CDouble z, const QuadratureConfig& cfg) {
  const auto supports = factor_supports(f);
  if (supports.empty()) return {0.0, 0.0};
  const CDouble minus_i_over_pi(0.0, -1.0 / std::numbers::pi);
  double correction = 0.0;  // integral of t log m(t) / (t^2+1)
  for (const auto& iv : supports) {
    correction += integrate_interval(
                      [&](double t) -> CDouble {
                        return CDouble(t * log_dip_modulus(f, t) / (t * t + 1.0), 0.0);
                      },
                      iv.lo, iv.hi, cfg)
                      .value.real();
  }
  if (z.imag() > 0.0) {
    CDouble cauchy{};
    for (const auto& iv : supports) {
      cauchy += integrate_interval(
                    [&](double t) -> CDouble {
                      return log_dip_modulus(f, t) / (CDouble(t, 0.0) - z);
                    },
                    iv.lo, iv.hi, cfg)
                    .value;
    }
    return minus_i_over_pi * (cauchy - correction);
  }
  // real axis: Plemelj boundary value
  const double x = z.real();
  double lmx = log_dip_modulus(f, x);
  const double delta = 1.0;
  double pv = 0.0;
  bool window_needed = lmx != 0.0;
  if (!window_needed) {
    for (const auto& iv : supports)
      if (iv.lo < x + delta && iv.hi > x - delta) window_needed = true;
  }
  if (window_needed) {
    auto quotient = [&](double t) -> CDouble {
      double num = log_dip_modulus(f, t) - lmx;
      return CDouble(num / (t - x), 0.0);
    };
    pv += integrate_interval(quotient, x - delta, x, cfg).value.real();
    pv += integrate_interval(quotient, x, x + delta, cfg).value.real();
  }
  for (const auto& iv : supports) {
    auto piece = [&](double lo, double hi) {
      if (lo >= hi) return;
      pv += integrate_interval(
                [&](double t) -> CDouble {
                  double lm = log_dip_modulus(f, t);
                  return CDouble(lm == 0.0 ? 0.0 : lm / (t - x), 0.0);
                },
                lo, hi, cfg)
                .value.real();
    };
    piece(iv.lo, std::min(iv.hi, x - delta));
    piece(std::max(iv.lo, x + delta), iv.hi);
  }
  return CDouble(lmx, 0.0) + minus_i_over_pi * (pv - correction);
}

// j-th derivative of the outer log, j >= 1, valid off the real axis or at
// real points outside the dip supports: -(i j!/pi) integral log m/(t-z)^{j+1}.
inline CDouble outer_log_deriv(const OuterDipFactor& f, CDouble z, unsigned j,
                               const QuadratureConfig& cfg) {
  const auto supports = factor_supports(f);
  CDouble acc{};
  for (const auto& iv : supports) {
    acc += integrate_interval(
               [&](double t) -> CDouble {
                 double lm = log_dip_modulus(f, t);
                 if (lm == 0.0) return {};
                 return lm / pow_int(CDouble(t, 0.0) - z, static_cast<long>(j) + 1);
               },
               iv.lo, iv.hi, cfg)
               .value;
  }
  return CDouble(0.0, -to_double(factorial(j)) / std::numbers::pi) * acc;
}

inline void require_outer_jet_point(const OuterDipFactor& f, CDouble z) {
  if (z.imag() > 0.0) return;
  if (dip_modulus(f, z.real()) < 1.0)
    fail(errc::domain, "outer-factor derivatives do not exist inside a dip support");
}

}  // namespace detail

/// Value of b at z with Im z >= 0 (real z hits the Plemelj boundary value of
/// outer factors). Exact path: S = GaussianRational, Blaschke-only b.
template <class S>
S eval(const UnitBallFunction& b, const S& z, const QuadratureConfig& cfg = {}) {
  if (field<S>::im(z) < 0) fail(errc::domain, "evaluation point must satisfy Im z >= 0");
  const bool real_axis = detail::is_real_point(z);
  S value = detail::phase_unit<S>(b.global_phase());
  for (const auto& f : b.factors()) {
    if (const auto* bl = std::get_if<BlaschkeFactor>(&f)) {
      S zk = detail::gaussian_to_scalar<S>(bl->zero);
      S zkc = detail::gaussian_to_scalar<S>(conj(bl->zero));
      value *= detail::phase_unit<S>(bl->phase) * (z - zk) / (z - zkc);
    } else if (const auto* pm = std::get_if<PointMassFactor>(&f)) {
      if constexpr (field<S>::is_exact) {
        fail(errc::exact_unsupported, "point-mass factors are not exact");
      } else {
        detail::require_off_point_mass(*pm, field<S>::real_to_double(field<S>::re(z)), real_axis);
        value *= exp(detail::point_mass_log(*pm, z));
      }
    } else if (const auto* ei = std::get_if<ExpInfinityFactor>(&f)) {
      if constexpr (field<S>::is_exact) {
        if (ei->coefficient != 0) fail(errc::exact_unsupported, "e^{iaz} is not exact");
        // a == 0: factor is identically 1
      } else {
        value *= exp(field<S>::i() * field<S>::from(ei->coefficient) * z);
      }
    } else if (const auto* od = std::get_if<OuterDipFactor>(&f)) {
      if constexpr (std::is_same_v<S, CDouble>) {
        value *= std::exp(detail::outer_log(*od, z, cfg));
      } else {
        fail(errc::precision_unsupported, "outer factors evaluate in double precision only");
      }
    }
  }
  return value;
}

// ---------------------------------------------------------------------------
// Derivative jets
// ---------------------------------------------------------------------------

/// Values b^(0)(w) ... b^(J)(w) at one point.
template <class S>
struct Jet {
  S base{};
  std::vector<S> values;

  unsigned order() const { return static_cast<unsigned>(values.size()) - 1; }
  const S& deriv(unsigned j) const {
    if (j >= values.size()) fail(errc::domain, "jet order too small for requested derivative");
    return values[j];
  }
  /// Taylor coefficient a_p = b^(p)(w)/p!.
  S taylor(unsigned p) const { return deriv(p) / field<S>::from(factorial(p)); }
};

namespace detail {

// jet of a product by the Leibniz convolution
template <class S>
std::vector<S> leibniz(const std::vector<S>& f, const std::vector<S>& g) {
  std::size_t J = f.size();
  std::vector<S> out(J, field<S>::from_int(0));
  for (std::size_t j = 0; j < J; ++j) {
    S acc = field<S>::from_int(0);
    for (std::size_t k = 0; k <= j; ++k)
      acc += field<S>::from(binomial(static_cast<long>(j), static_cast<long>(k))) * f[k] * g[j - k];
    out[j] = acc;
  }
  return out;
}

// derivatives of f = e^L from f(w) and L'(w)..L^(J)(w):
// f^(j) = sum_k C(j-1,k) L^(k+1) f^(j-1-k)
template <class S>
std::vector<S> exp_jet(const S& value, const std::vector<S>& log_derivs, unsigned J) {
  std::vector<S> out(J + 1, field<S>::from_int(0));
  out[0] = value;
  for (unsigned j = 1; j <= J; ++j) {
    S acc = field<S>::from_int(0);
    for (unsigned k = 0; k + 1 <= j; ++k)
      acc += field<S>::from(binomial(j - 1, k)) * log_derivs[k] * out[j - 1 - k];
    out[j] = acc;
  }
  return out;
}

template <class S>
std::vector<S> factor_jet(const Factor& f, const S& w, unsigned J, bool real_axis,
                          const QuadratureConfig& cfg) {
  if (const auto* bl = std::get_if<BlaschkeFactor>(&f)) {
    S zk = gaussian_to_scalar<S>(bl->zero);
    S zkc = gaussian_to_scalar<S>(conj(bl->zero));
    S u = phase_unit<S>(bl->phase);
    std::vector<S> out(J + 1, field<S>::from_int(0));
    out[0] = u * (w - zk) / (w - zkc);
    S span = zk - zkc;  // 2i Im z_k
    for (unsigned j = 1; j <= J; ++j) {
      S d = field<S>::from(factorial(j)) / pow_int(w - zkc, static_cast<long>(j) + 1);
      if (j % 2 == 0) d = -d;
      out[j] = u * span * d;  // -(z_k - conj z_k) (-1)^j j! (w - conj z_k)^{-j-1}
    }
    return out;
  }
  if (const auto* pm = std::get_if<PointMassFactor>(&f)) {
    if constexpr (field<S>::is_exact) {
      fail(errc::exact_unsupported, "point-mass factors are not exact");
    } else {
      require_off_point_mass(*pm, field<S>::real_to_double(field<S>::re(w)), real_axis);
      S value = exp(point_mass_log(*pm, w));
      std::vector<S> ld(J, field<S>::from_int(0));
      for (unsigned k = 1; k <= J; ++k) ld[k - 1] = point_mass_log_deriv(*pm, w, k);
      return exp_jet(value, ld, J);
    }
  }
  if (const auto* ei = std::get_if<ExpInfinityFactor>(&f)) {
    if constexpr (field<S>::is_exact) {
      if (ei->coefficient != 0) fail(errc::exact_unsupported, "e^{iaz} is not exact");
      std::vector<S> out(J + 1, field<S>::from_int(0));
      out[0] = field<S>::from_int(1);
      return out;
    } else {
      S ia = field<S>::i() * field<S>::from(ei->coefficient);
      S value = exp(ia * w);
      std::vector<S> ld(J, field<S>::from_int(0));
      if (J >= 1) ld[0] = ia;
      return exp_jet(value, ld, J);
    }
  }
  const auto& od = std::get<OuterDipFactor>(f);
  if constexpr (std::is_same_v<S, CDouble>) {
    require_outer_jet_point(od, w);
    CDouble value = std::exp(outer_log(od, w, cfg));
    std::vector<CDouble> ld(J);
    for (unsigned k = 1; k <= J; ++k) ld[k - 1] = outer_log_deriv(od, w, k, cfg);
    return exp_jet(value, ld, J);
  } else {
    fail(errc::precision_unsupported, "outer-factor jets evaluate in double precision only");
  }
}

}  // namespace detail

/// Jet of b at w up to order J, by per-factor closed forms (Blaschke factors,
/// exponential factors via the log-derivative recurrence, outer factors via
/// Cauchy-integral quadrature) combined with the Leibniz convolution.
template <class S>
Jet<S> derivative_jet(const UnitBallFunction& b, const S& w, unsigned J,
                      const QuadratureConfig& cfg = {}) {
  if (field<S>::im(w) < 0) fail(errc::domain, "jet base point must satisfy Im w >= 0");
  const bool real_axis = detail::is_real_point(w);
  std::vector<S> acc(J + 1, field<S>::from_int(0));
  acc[0] = detail::phase_unit<S>(b.global_phase());
  for (const auto& f : b.factors())
    acc = detail::leibniz(acc, detail::factor_jet(f, w, J, real_axis, cfg));
  return Jet<S>{w, std::move(acc)};
}

/// a_0 .. a_J at a boundary point.
template <class S>
std::vector<S> taylor_coeffs(const UnitBallFunction& b, const S& x0, unsigned J,
                             const QuadratureConfig& cfg = {}) {
  Jet<S> jet = derivative_jet(b, x0, J, cfg);
  std::vector<S> a;
  a.reserve(J + 1);
  for (unsigned p = 0; p <= J; ++p) a.push_back(jet.taylor(p));
  return a;
}

// ---------------------------------------------------------------------------
// Radial extrapolation of boundary jets
// ---------------------------------------------------------------------------

struct Extrapolated {
  CDouble value{};
  double error_estimate = 0.0;
};

/// Neville polynomial extrapolation of samples at parameters ts > 0 to t = 0.
/// The error estimate is the smallest consecutive-diagonal step observed.
inline Extrapolated extrapolate_to_zero(const std::vector<double>& ts, std::vector<CDouble> col) {
  if (col.size() != ts.size() || ts.size() < 2)
    fail(errc::domain, "extrapolation needs matching samples for at least two t values");
  const std::size_t K = ts.size();
  CDouble prev_diag = col[K - 1];  // raw sample at the smallest t
  CDouble best{};
  double best_err = std::numeric_limits<double>::infinity();
  for (std::size_t m = 1; m < K; ++m) {
    for (std::size_t k = K - 1; k >= m; --k) {
      double ti = ts[k - m], tj = ts[k];
      col[k] = (tj * col[k - 1] - ti * col[k]) / (tj - ti);
      if (k == m) break;  // unsigned guard
    }
    double step = std::abs(col[K - 1] - prev_diag);
    if (step < best_err) {
      best_err = step;
      best = col[K - 1];
    }
    prev_diag = col[K - 1];
  }
  if (!std::isfinite(best.real()) || !std::isfinite(best.imag()) ||
      best_err > 1e8 * (1.0 + std::abs(best)))
    fail(errc::not_converging, "extrapolation iterates do not settle");
  return {best, best_err};
}

struct ExtrapolatedJet {
  Jet<CDouble> jet;
  double error_estimate = 0.0;
};

/// Richardson (Neville) extrapolation of derivative_jet(b, x0 + it, J) to
/// t -> 0+ along a decreasing schedule; the error estimate comes from the
/// extrapolation diagonals.
inline ExtrapolatedJet radial_jet_extrapolate(const UnitBallFunction& b, double x0, unsigned J,
                                              const std::vector<double>& t_schedule,
                                              const QuadratureConfig& cfg = {}) {
  if (t_schedule.size() < 2) fail(errc::domain, "extrapolation needs at least two t values");
  for (std::size_t i = 1; i < t_schedule.size(); ++i)
    if (!(t_schedule[i] < t_schedule[i - 1] && t_schedule[i] > 0))
      fail(errc::domain, "t schedule must be strictly decreasing and positive");

  const std::size_t K = t_schedule.size();
  std::vector<std::vector<CDouble>> samples(K);
  for (std::size_t k = 0; k < K; ++k)
    samples[k] = derivative_jet(b, CDouble(x0, t_schedule[k]), J, cfg).values;

  Jet<CDouble> out{CDouble(x0, 0.0), std::vector<CDouble>(J + 1)};
  double worst = 0.0;
  for (unsigned j = 0; j <= J; ++j) {
    std::vector<CDouble> col(K);
    for (std::size_t k = 0; k < K; ++k) col[k] = samples[k][j];
    Extrapolated e;
    try {
      e = extrapolate_to_zero(t_schedule, std::move(col));
    } catch (const error& err) {
      if (err.code() == errc::not_converging)
        fail(errc::not_converging, "radial jet iterates do not settle");
      throw;
    }
    out.values[j] = e.value;
    worst = std::max(worst, e.error_estimate);
  }
  return {std::move(out), worst};
}

}  // namespace dbrk
