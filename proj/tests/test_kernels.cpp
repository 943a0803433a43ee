#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "dbrk/kernels.hpp"
#include "dbrk/representation.hpp"

using namespace dbrk;

namespace {

constexpr double kPi = std::numbers::pi;

UnitBallFunction single_blaschke_at_i() {
  return UnitBallFunction({BlaschkeFactor{{Rational(0), Rational(1)}, Rational(0)}});
}

UnitBallFunction two_zero_blaschke() {
  return UnitBallFunction({BlaschkeFactor{{Rational(0), Rational(1)}, Rational(0)},
                           BlaschkeFactor{{Rational(1), Rational(1)}, Rational(0)}});
}

}  // namespace

TEST_CASE("kernel_b worked values") {
  UnitBallFunction empty;
  auto je = derivative_jet(empty, CDouble(0.0, 1.0), 0);
  CHECK(std::abs(kernel_b(empty, interior_spec(CDouble(0.0, 1.0), 0u), je, CDouble(0.0, 1.0))) ==
        0.0);

  auto b = single_blaschke_at_i();
  CDouble i01(0.0, 1.0);
  auto ji = derivative_jet(b, i01, 0);
  CHECK(std::abs(kernel_b(b, interior_spec(i01, 0u), ji, i01) - CDouble(1.0 / (4.0 * kPi), 0.0)) <
        1e-15);

  auto j0 = derivative_jet(b, CDouble(0.0, 0.0), 1);
  auto spec = boundary_spec(CDouble(0.0, 0.0), 0u);
  CHECK(std::abs(kernel_b(b, spec, j0, CDouble(0.0, 2.0)) - CDouble(1.0 / (3.0 * kPi), 0.0)) <
        1e-15);
}

TEST_CASE("kernel at the boundary base point uses the phi-jet limit") {
  auto b = single_blaschke_at_i();
  auto spec = boundary_spec(CDouble(0.0, 0.0), 0u);
  auto jet = derivative_jet(b, CDouble(0.0, 0.0), 1);
  auto phi = phi_jet(spec, jet);
  // k(x0) = (i n!/2pi) phi^{(n+1)}(x0)/(n+1)! ; phi'(0) = -2i  =>  k(0) = 1/pi
  CDouble at_base = kernel_b(b, spec, jet, CDouble(0.0, 0.0), &phi);
  CHECK(std::abs(at_base - CDouble(1.0 / kPi, 0.0)) < 1e-15);
  // continuity: the limit matches nearby values
  CHECK(std::abs(kernel_b(b, spec, jet, CDouble(1e-6, 0.0)) - at_base) < 1e-5);
  // without the phi jet the evaluation is singular
  CHECK_THROWS_AS(kernel_b(b, spec, jet, CDouble(0.0, 0.0)), error);
}

TEST_CASE("kernel_rho worked values") {
  auto b = single_blaschke_at_i();
  CDouble i01(0.0, 1.0);
  auto ji = derivative_jet(b, i01, 0);
  CHECK(std::abs(kernel_rho(interior_spec(i01, 0u), ji, CDouble(0.7, 0.0))) == 0.0);  // b(i) = 0

  UnitBallFunction empty;
  auto je = derivative_jet(empty, i01, 0);
  for (double t : {-1.5, 0.0, 2.25}) {
    CDouble expected = CDouble(0.0, 1.0 / (2.0 * kPi)) / CDouble(t, 1.0);  // (i/2pi)/(t+i)
    CHECK(std::abs(kernel_rho(interior_spec(i01, 0u), je, CDouble(t, 0.0)) - expected) < 1e-16);
  }
  CHECK_THROWS_AS(kernel_rho(boundary_spec(CDouble(0.0, 0.0), 1u),
                             derivative_jet(b, CDouble(0.0, 0.0), 1), CDouble(0.0, 0.0)),
                  error);
}

TEST_CASE("kernel_rho is the conjugate-parameter derivative of the n=0 kernel") {
  auto b = two_zero_blaschke();
  const double h = 1e-4;
  CDouble omega(0.3, 0.9), t(1.7, 0.0);
  auto jet_at = [&](CDouble w, unsigned J) { return derivative_jet(b, w, J); };
  // first conj-derivative: vary omega along the real axis
  CDouble kp = kernel_rho(interior_spec(omega + h, 0u), jet_at(omega + h, 0), t);
  CDouble km = kernel_rho(interior_spec(omega - h, 0u), jet_at(omega - h, 0), t);
  CDouble fd = (kp - km) / (2.0 * h);
  CDouble k1 = kernel_rho(interior_spec(omega, 1u), jet_at(omega, 1), t);
  CHECK(std::abs(fd - k1) < 1e-7 * std::max(1.0, std::abs(k1)));
}

TEST_CASE("kernel_b is the conjugate-parameter derivative of the n=0 kernel") {
  auto b = two_zero_blaschke();
  const double h = 1e-4;
  CDouble omega(0.25, 1.1), z(0.8, 0.4);
  auto k_at = [&](CDouble w, unsigned n) {
    auto jet = derivative_jet(b, w, n);
    return kernel_b(b, interior_spec(w, n), jet, z);
  };
  CDouble fd1 = (k_at(omega + h, 0) - k_at(omega - h, 0)) / (2.0 * h);
  CHECK(std::abs(fd1 - k_at(omega, 1)) < 1e-6 * std::max(1.0, std::abs(fd1)));
  CDouble fd2 = (k_at(omega + h, 0) - 2.0 * k_at(omega, 0) + k_at(omega - h, 0)) / (h * h);
  CHECK(std::abs(fd2 - k_at(omega, 2)) < 1e-5 * std::max(1.0, std::abs(fd2)));
}

TEST_CASE("kernel z-derivative: closed form, reduction at q=0, FD oracle") {
  auto b = single_blaschke_at_i();
  CDouble i01(0.0, 1.0);
  auto ji = derivative_jet(b, i01, 0);
  auto spec = interior_spec(i01, 0u);
  auto zjet = derivative_jet(b, i01, 1);
  // q=1 at z=i: derivative of (i/2pi)/(z+i) is -(i/2pi)/(z+i)^2 -> i/(8pi)
  CHECK(std::abs(kernel_b_z_derivative(spec, ji, zjet, 1) - CDouble(0.0, 1.0 / (8.0 * kPi))) <
        1e-16);
  // q=0 reduces to the kernel itself
  CHECK(std::abs(kernel_b_z_derivative(spec, ji, derivative_jet(b, i01, 0), 0) -
                 kernel_b(b, spec, ji, i01)) < 1e-16);

  auto b2 = two_zero_blaschke();
  CDouble w(0.4, 1.3), z(-0.6, 0.8);
  auto jw = derivative_jet(b2, w, 2);
  auto sp = interior_spec(w, 2u);
  auto phi_dummy = nullptr;
  (void)phi_dummy;
  const double h = 1e-4;
  auto kval = [&](CDouble zz) { return kernel_b(b2, sp, jw, zz); };
  for (unsigned q : {1u, 2u}) {
    CDouble fd = q == 1 ? (kval(z + h) - kval(z - h)) / (2.0 * h)
                        : (kval(z + h) - 2.0 * kval(z) + kval(z - h)) / (h * h);
    CDouble cf = kernel_b_z_derivative(sp, jw, derivative_jet(b2, z, q), q);
    CHECK(std::abs(fd - cf) < 1e-6 * std::max(1.0, std::abs(cf)));
  }
}

TEST_CASE("phi jet values and the vanishing property") {
  auto b = single_blaschke_at_i();
  auto spec = boundary_spec(GaussianRational(Rational(0)), 0u);
  auto jet = derivative_jet(b, GaussianRational(Rational(0)), 1);
  auto phi = phi_jet(spec, jet);
  CHECK(phi.values[0] == GaussianRational(Rational(0)));
  CHECK(phi.values[1] == GaussianRational(Rational(0), Rational(-2)));  // -2i

  UnitBallFunction empty;
  auto espec = boundary_spec(GaussianRational(Rational(0)), 2u);
  auto ephi = phi_jet(espec, derivative_jet(empty, GaussianRational(Rational(0)), 5));
  for (const auto& v : ephi.values) CHECK(v == GaussianRational(Rational(0)));

  // phi^(l)(x0) = 0 for l <= n, exactly, for finite Blaschke at rational x0
  auto b2 = two_zero_blaschke();
  for (int num = -1; num <= 1; ++num) {
    GaussianRational x0(Rational(num, 2));
    for (unsigned n = 0; n <= 3; ++n) {
      auto sp = boundary_spec(x0, n);
      auto ph = phi_jet(sp, derivative_jet(b2, x0, 2 * n + 1));
      for (unsigned l = 0; l <= n; ++l) CHECK(ph.values[l] == GaussianRational(Rational(0)));
    }
  }
}

TEST_CASE("h function and its kernel expansion") {
  UnitBallFunction empty;
  auto espec = boundary_spec(CDouble(0.0, 0.0), 1u);
  auto ejet = derivative_jet(empty, CDouble(0.0, 0.0), 3);
  CHECK(std::abs(h_function(empty, espec, ejet, CDouble(0.3, 0.9))) < 1e-16);

  auto b = single_blaschke_at_i();
  auto spec = boundary_spec(CDouble(0.0, 0.0), 0u);
  auto jet = derivative_jet(b, CDouble(0.0, 0.0), 1);
  CHECK(std::abs(h_function(b, spec, jet, CDouble(0.0, 1.0)) - CDouble(0.0, -1.0)) < 1e-15);
  CHECK_THROWS_AS(h_function(b, spec, jet, CDouble(0.0, 0.0)), error);

  // h = 2 i pi sum_p a_{n-p}/p! * k_{x0,p}, tested on a z grid
  auto b2 = two_zero_blaschke();
  const unsigned n = 2;
  CDouble x0(0.5, 0.0);
  auto jet2 = derivative_jet(b2, x0, 2 * n + 1);
  auto spec2 = boundary_spec(x0, n);
  for (double re : {-0.8, 0.2, 1.4}) {
    for (double im : {0.3, 1.2}) {
      CDouble z(re, im);
      CDouble lhs = h_function(b2, spec2, jet2, z);
      CDouble bz = eval(b2, z);
      CDouble rhs{};
      for (unsigned p = 0; p <= n; ++p) {
        auto sp = boundary_spec(x0, p);
        CDouble kp = kernel_b_value_scaled(bz, sp, jet2, z) / kPi;
        rhs += jet2.taylor(n - p) / to_double(factorial(p)) * kp;
      }
      rhs *= CDouble(0.0, 2.0 * kPi);
      CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("boundary norm formula") {
  auto b = single_blaschke_at_i();
  auto spec = boundary_spec(CDouble(0.0, 0.0), 0u);
  auto jet = derivative_jet(b, CDouble(0.0, 0.0), 1);
  auto norm = norm_sq_boundary(spec, jet);
  CHECK(std::abs(norm.value() - 1.0 / kPi) < 1e-16);

  UnitBallFunction empty;
  auto enorm = norm_sq_boundary(boundary_spec(CDouble(0.0, 0.0), 1u),
                                derivative_jet(empty, CDouble(0.0, 0.0), 3));
  CHECK(enorm.value() == 0.0);

  // exact path: pi * ||k||^2 is rational
  auto espec = boundary_spec(GaussianRational(Rational(0)), 0u);
  auto ejet = derivative_jet(b, GaussianRational(Rational(0)), 1);
  auto ex = norm_sq_boundary(espec, ejet);
  CHECK(ex.pi_scaled == Rational(1));

  // against independent L2 quadrature, n = 1, two zeros
  auto b2 = two_zero_blaschke();
  auto spec2 = boundary_spec(GaussianRational(Rational(0)), 1u);
  auto jet2 = derivative_jet(b2, GaussianRational(Rational(0)), 3);
  auto formula = norm_sq_boundary(spec2, jet2);
  auto quad = boundary_norm_l2(b2, Rational(0), 1);
  CHECK(quad.converged);
  CHECK(std::abs(formula.value() - quad.value.real()) < 1e-8 * formula.value());
}

TEST_CASE("interior norm formula") {
  auto b = single_blaschke_at_i();
  CDouble i01(0.0, 1.0);
  auto norm = norm_sq_interior(interior_spec(i01, 0u), derivative_jet(b, i01, 0));
  CHECK(std::abs(norm.value() - 1.0 / (4.0 * kPi)) < 1e-16);

  // agreement with the generic z-derivative at omega
  auto b2 = two_zero_blaschke();
  CDouble w(0.3, 0.7);
  for (unsigned n : {0u, 1u, 2u}) {
    auto sp = interior_spec(w, n);
    auto jw = derivative_jet(b2, w, n);
    auto nv = norm_sq_interior(sp, jw);
    CDouble dv = kernel_b_z_derivative(sp, jw, derivative_jet(b2, w, n), n);
    CHECK(std::abs(nv.value() - dv.real()) < 1e-10 * std::max(1.0, nv.value()));
    CHECK(std::abs(dv.imag()) < 1e-10 * std::max(1.0, nv.value()));
  }

  // radial limit approaches the boundary norm
  auto bspec = boundary_spec(CDouble(0.0, 0.0), 1u);
  auto bnorm = norm_sq_boundary(bspec, derivative_jet(b2, CDouble(0.0, 0.0), 3));
  double prev = 1e9;
  for (double t : {1e-1, 1e-2, 1e-3}) {
    CDouble wt(0.0, t);
    auto nv = norm_sq_interior(interior_spec(wt, 1u), derivative_jet(b2, wt, 1));
    double gap = std::abs(nv.value() - bnorm.value());
    CHECK(gap < prev + 1e-12);
    prev = gap;
  }
  CHECK(prev < 1e-2 * bnorm.value());  // gap ~ C t with C of order a few
}

TEST_CASE("interior norm cancellation guard trips in double precision") {
  auto b = two_zero_blaschke();
  // n = 2 at t = 1e-3 needs ~ 5 * 10 bits beyond double's comfort
  CDouble wt(0.0, 1e-5);
  CHECK_THROWS_AS(
      norm_sq_interior(interior_spec(wt, 2u), derivative_jet(b, wt, 2)), error);
  // the exact path handles the same point
  GaussianRational wte(Rational(0), Rational(1, 100000));
  auto ex = norm_sq_interior(interior_spec(wte, 2u), derivative_jet(b, wte, 2));
  CHECK(ex.pi_scaled > 0);
}

TEST_CASE("lambda coefficients") {
  auto b = single_blaschke_at_i();
  GaussianRational x0(Rational(0));
  auto a3 = taylor_coeffs(b, x0, 3);
  // n = 1: lambda_0 = -C(2,1), lambda_1 = lambda_2 = 0, lambda_3 = 16
  CHECK(lambda_coeff(a3, 0, 1) == GaussianRational(Rational(-2)));
  CHECK(lambda_coeff(a3, 1, 1) == GaussianRational(Rational(0)));
  CHECK(lambda_coeff(a3, 2, 1) == GaussianRational(Rational(0)));
  CHECK(lambda_coeff(a3, 3, 1) == GaussianRational(Rational(16)));
  // n = 0: lambda_1 relates to the norm: -4 pi/n!^2 * 1/pi = -4
  auto a1 = taylor_coeffs(b, x0, 1);
  CHECK(lambda_coeff(a1, 1, 0) == GaussianRational(Rational(-4)));
  CHECK(lambda_coeff(a1, 0, 0) == GaussianRational(Rational(1)));

  // lambda_0 = (-1)^n C(2n,n) for any unimodular boundary data
  auto b2 = two_zero_blaschke();
  auto a7 = taylor_coeffs(b2, GaussianRational(Rational(1, 3)), 7);
  for (unsigned n = 0; n <= 3; ++n) {
    GaussianRational expect(Rational(binomial(2 * n, n)));
    if (n % 2) expect = -expect;
    CHECK(lambda_coeff(a7, 0, n) == expect);
  }
}

TEST_CASE("hermitian symmetry of kernel derivatives") {
  auto b = two_zero_blaschke();
  CDouble w(0.2, 0.8), omega(-0.5, 1.4);
  for (unsigned m : {0u, 1u}) {
    for (unsigned n : {0u, 2u}) {
      auto sw = interior_spec(w, m);
      auto so = interior_spec(omega, n);
      auto jw = derivative_jet(b, w, m);
      auto jo = derivative_jet(b, omega, n);
      // (k_{w,m})^(n)(omega) = conj((k_{omega,n})^(m)(w))
      CDouble lhs = kernel_b_z_derivative(sw, jw, derivative_jet(b, omega, n), n);
      CDouble rhs = kernel_b_z_derivative(so, jo, derivative_jet(b, w, m), m);
      CHECK(std::abs(lhs - std::conj(rhs)) < 1e-12 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("order requirements fail fast") {
  auto b = single_blaschke_at_i();
  auto spec = boundary_spec(CDouble(0.0, 0.0), 1u);
  auto short_jet = derivative_jet(b, CDouble(0.0, 0.0), 1);  // order 1 < 2n+1 = 3
  CHECK_THROWS_AS(phi_jet(spec, short_jet), error);
  CHECK_THROWS_AS(norm_sq_boundary(spec, short_jet), error);
  CHECK_THROWS_AS(short_jet.deriv(2), error);
  CHECK_THROWS_AS(lambda_coeff(std::vector<CDouble>{CDouble(1.0, 0.0)}, 1, 0), error);
}

TEST_CASE("norm guards reject inconsistent jets") {
  // hand-built jets that violate the boundary structure trip the checks
  auto spec = boundary_spec(CDouble(0.0, 0.0), 0u);
  Jet<CDouble> bogus{CDouble(0.0, 0.0), {CDouble(1.0, 0.0), CDouble(1.0, 0.0)}};
  CHECK_THROWS_AS(norm_sq_boundary(spec, bogus), error);  // Re(conj(a0) a1) != 0
  Jet<CDouble> negative{CDouble(0.0, 0.0), {CDouble(1.0, 0.0), CDouble(0.0, -2.0)}};
  CHECK_THROWS_AS(norm_sq_boundary(spec, negative), error);  // norm would be negative
}
