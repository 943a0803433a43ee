#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <vector>

#include "dbrk/errors.hpp"
#include "dbrk/field.hpp"

namespace dbrk {

struct QuadratureConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  unsigned max_subdivisions = 4000;
  double center = 0.0;  // peak location; the tan substitution is centered here
};

struct IntegralResult {
  CDouble value{};
  double error_estimate = 0.0;
  unsigned subdivisions = 0;
  bool converged = true;

  IntegralResult& operator+=(const IntegralResult& o) {
    value += o.value;
    error_estimate += o.error_estimate;
    subdivisions += o.subdivisions;
    converged = converged && o.converged;
    return *this;
  }
};

namespace detail {

// Gauss 7 / Kronrod 15 pair on [-1,1] (QUADPACK DQK15 constants). The Gauss
// nodes are the odd-index Kronrod abscissae.
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kK15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
void gk15(F&& f, double a, double b, CDouble& k15, double& err) {
  const double h = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  CDouble gauss{}, kron{};
  for (int j = 0; j < 8; ++j) {
    CDouble fsum;
    if (j == 7) {
      fsum = f(mid);
    } else {
      fsum = f(mid - h * kGK15Nodes[j]) + f(mid + h * kGK15Nodes[j]);
    }
    kron += kK15Weights[j] * fsum;
    if (j % 2 == 1) gauss += kG7Weights[j / 2] * fsum;
  }
  k15 = kron * h;
  err = std::abs((kron - gauss) * h);
  if (!std::isfinite(k15.real()) || !std::isfinite(k15.imag()))
    fail(errc::quadrature_failure, "integrand produced a non-finite value");
}

struct Segment {
  double a, b;
  CDouble value;
  double error;
  unsigned id;  // creation order; deterministic heap tie-break
};

struct SegmentWorse {
  bool operator()(const Segment& x, const Segment& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.id > y.id;
  }
};

/// Globally adaptive bisection with the embedded G7/K15 error estimate.
/// Worst-interval-first over a deterministic heap; the final value is summed
/// left to right so the result does not depend on refinement history.
template <class F>
IntegralResult adaptive(F&& f, double a, double b, const QuadratureConfig& cfg) {
  std::priority_queue<Segment, std::vector<Segment>, SegmentWorse> heap;
  unsigned next_id = 0;
  CDouble total{};
  double err = 0.0;
  auto push = [&](double lo, double hi) {
    Segment s{lo, hi, {}, 0.0, next_id++};
    gk15(f, lo, hi, s.value, s.error);
    total += s.value;
    err += s.error;
    heap.push(s);
  };
  push(a, b);
  unsigned splits = 0;
  bool converged = true;
  while (err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
    if (splits >= cfg.max_subdivisions) {
      converged = false;
      break;
    }
    Segment worst = heap.top();
    if (worst.error <= 0.0) break;  // nothing left to gain
    heap.pop();
    total -= worst.value;
    err -= worst.error;
    double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // interval collapsed to machine resolution without meeting the target
      heap.push(worst);
      total += worst.value;
      err += worst.error;
      converged = false;
      break;
    }
    push(worst.a, mid);
    push(mid, worst.b);
    ++splits;
  }
  std::vector<Segment> segs;
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(),
            [](const Segment& x, const Segment& y) { return x.a < y.a; });
  IntegralResult r;
  r.subdivisions = splits;
  r.converged = converged;
  for (const auto& s : segs) {
    r.value += s.value;
    r.error_estimate += s.error;
  }
  return r;
}

}  // namespace detail

/// Integral over a finite interval.
template <class F>
IntegralResult integrate_interval(F&& f, double a, double b, const QuadratureConfig& cfg = {}) {
  if (!(a < b)) fail(errc::domain, "integrate_interval needs a < b");
  return detail::adaptive(std::forward<F>(f), a, b, cfg);
}

/// Integral over the whole real line via t = center + tan(theta). The
/// integrand must decay at least like |t|^-2 so the transformed integrand is
/// bounded at the endpoints (every product of two kernels does).
template <class F>
IntegralResult integrate_real_line(F&& f, const QuadratureConfig& cfg = {}) {
  const double c = cfg.center;
  auto g = [&](double theta) -> CDouble {
    double co = std::cos(theta);
    double t = c + std::tan(theta);
    return f(t) / (co * co);
  };
  constexpr double half_pi = 1.57079632679489661923;
  return detail::adaptive(g, -half_pi, half_pi, cfg);
}

/// L2(R) pairing  integral of f(t) conj(g(t)) dt.
template <class F, class G>
IntegralResult l2_pairing(F&& f, G&& g, const QuadratureConfig& cfg = {}) {
  return integrate_real_line(
      [&](double t) -> CDouble { return f(t) * std::conj(g(t)); }, cfg);
}

}  // namespace dbrk
