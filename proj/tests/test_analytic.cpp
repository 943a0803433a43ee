#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "dbrk/analytic.hpp"
#include "dbrk/config.hpp"

using namespace dbrk;

namespace {

UnitBallFunction single_blaschke_at_i() {
  return UnitBallFunction({BlaschkeFactor{{Rational(0), Rational(1)}, Rational(0)}});
}

UnitBallFunction two_zero_blaschke() {
  return UnitBallFunction({BlaschkeFactor{{Rational(0), Rational(1)}, Rational(0)},
                           BlaschkeFactor{{Rational(1), Rational(1)}, Rational(0)}});
}

UnitBallFunction dip_at_3() {
  return UnitBallFunction(
      {OuterDipFactor{{Dip{Rational(3), Rational(1), Rational(1, 2)}}}});
}

UnitBallFunction mixed_function() {
  return UnitBallFunction({BlaschkeFactor{{Rational(1, 2), Rational(2)}, Rational(0)},
                           PointMassFactor{Rational(-2), Rational(1, 2)},
                           ExpInfinityFactor{Rational(1, 4)},
                           OuterDipFactor{{Dip{Rational(3), Rational(1), Rational(1, 3)}}}},
                          Rational(1, 5));
}

// order-j derivative by central finite differences of eval
CDouble fd_derivative(const UnitBallFunction& b, CDouble w, unsigned j, double h) {
  auto f = [&](double s) { return eval(b, w + CDouble(s, 0.0)); };
  switch (j) {
    case 1: return (f(h) - f(-h)) / (2.0 * h);
    case 2: return (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
    case 3: return (f(2.0 * h) - 2.0 * f(h) + 2.0 * f(-h) - f(-2.0 * h)) / (2.0 * h * h * h);
    default: FAIL("unsupported order"); return {};
  }
}

}  // namespace

TEST_CASE("construction validates factor invariants") {
  CHECK_THROWS_AS(UnitBallFunction({BlaschkeFactor{{Rational(0), Rational(-1)}, Rational(0)}}),
                  error);
  CHECK_THROWS_AS(UnitBallFunction({PointMassFactor{Rational(0), Rational(0)}}), error);
  CHECK_THROWS_AS(UnitBallFunction({ExpInfinityFactor{Rational(-1)}}), error);
  CHECK_THROWS_AS(
      UnitBallFunction({OuterDipFactor{{Dip{Rational(0), Rational(1), Rational(2)}}}}), error);
}

TEST_CASE("eval basics") {
  auto b = single_blaschke_at_i();
  CHECK(std::abs(eval(b, CDouble(0.0, 1.0))) == 0.0);
  CHECK(std::abs(eval(b, CDouble(0.0, 0.0)) - CDouble(-1.0, 0.0)) < 1e-15);
  UnitBallFunction empty;
  CHECK(eval(empty, CDouble(0.3, 0.7)) == CDouble(1.0, 0.0));
  CHECK_THROWS_AS(eval(b, CDouble(0.0, -1.0)), error);
  // exact path agrees
  GaussianRational z0(Rational(0));
  CHECK(eval(b, z0) == GaussianRational(Rational(-1)));
}

TEST_CASE("eval is contractive on a grid") {
  auto b = mixed_function();
  for (double re = -3.7; re <= 4.0; re += 0.9) {  // grid avoids the atom at -2
    for (double im : {0.0, 0.05, 0.5, 2.0, 10.0}) {
      double m = std::abs(eval(b, CDouble(re, im)));
      CHECK(m <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("point-mass factor is unimodular on the real line and singular at its atom") {
  UnitBallFunction b({PointMassFactor{Rational(0), Rational(1)}});
  CHECK(std::abs(std::abs(eval(b, CDouble(2.0, 0.0))) - 1.0) < 1e-14);
  CHECK(std::abs(eval(b, CDouble(0.0, 1e-3))) < 1.0);
  CHECK_THROWS_AS(eval(b, CDouble(0.0, 0.0)), error);
  CHECK_THROWS_AS(rho(b, 0.0), error);
}

TEST_CASE("derivative jets: closed-form cases") {
  auto b = single_blaschke_at_i();
  auto jet = derivative_jet(b, CDouble(0.0, 0.0), 2);
  CHECK(std::abs(jet.values[0] - CDouble(-1.0, 0.0)) < 1e-15);
  CHECK(std::abs(jet.values[1] - CDouble(0.0, -2.0)) < 1e-15);
  CHECK(std::abs(jet.values[2] - CDouble(4.0, 0.0)) < 1e-15);

  UnitBallFunction trivial_exp({ExpInfinityFactor{Rational(0)}});
  auto jt = derivative_jet(trivial_exp, CDouble(0.5, 0.0), 3);
  CHECK(jt.values[0] == CDouble(1.0, 0.0));
  CHECK(std::abs(jt.values[1]) == 0.0);
  CHECK(std::abs(jt.values[3]) == 0.0);

  // exact jet matches the floating one
  auto ejet = derivative_jet(b, GaussianRational(Rational(0)), 2);
  CHECK(ejet.values[0] == GaussianRational(Rational(-1)));
  CHECK(ejet.values[1] == GaussianRational(Rational(0), Rational(-2)));
  CHECK(ejet.values[2] == GaussianRational(Rational(4)));
}

TEST_CASE("taylor coefficients") {
  auto b = single_blaschke_at_i();
  auto a = taylor_coeffs(b, CDouble(0.0, 0.0), 1);
  CHECK(std::abs(a[0] - CDouble(-1.0, 0.0)) < 1e-15);
  CHECK(std::abs(a[1] - CDouble(0.0, -2.0)) < 1e-15);
  UnitBallFunction empty;
  auto ae = taylor_coeffs(empty, CDouble(0.0, 0.0), 3);
  CHECK(ae[0] == CDouble(1.0, 0.0));
  CHECK(std::abs(ae[2]) == 0.0);
  // inner function off the spectrum: |a_0| = 1
  auto am = taylor_coeffs(two_zero_blaschke(), CDouble(5.0, 0.0), 0);
  CHECK(std::abs(std::abs(am[0]) - 1.0) < 1e-14);
}

TEST_CASE("finite-difference oracle for every factor kind, orders 1-3") {
  std::vector<std::pair<const char*, UnitBallFunction>> cases;
  cases.emplace_back("blaschke", single_blaschke_at_i());
  cases.emplace_back("point_mass", UnitBallFunction({PointMassFactor{Rational(-2), Rational(1, 2)}}));
  cases.emplace_back("exp_infinity", UnitBallFunction({ExpInfinityFactor{Rational(1, 2)}}));
  cases.emplace_back("outer_dip", dip_at_3());
  cases.emplace_back("mixed", mixed_function());

  const CDouble w(0.4, 0.8);
  // step sizes chosen so truncation dominates rounding (rounding ~ eps/h^j)
  const double steps[4] = {0.0, 1e-3, 4e-3, 2e-2};
  for (auto& [name, b] : cases) {
    INFO(name);
    auto jet = derivative_jet(b, w, 3);
    for (unsigned j = 1; j <= 3; ++j) {
      double h1 = steps[j], h2 = steps[j] / 2.0;
      double e1 = std::abs(fd_derivative(b, w, j, h1) - jet.values[j]);
      double e2 = std::abs(fd_derivative(b, w, j, h2) - jet.values[j]);
      double scale = std::max(1.0, std::abs(jet.values[j]));
      INFO("order " << j << " e(h)=" << e1 << " e(h/2)=" << e2);
      CHECK(e1 < 1e-2 * scale);
      if (e2 > 1e-10 * scale) {  // above the rounding floor: order is measurable
        double observed = std::log2(e1 / e2);
        CHECK(observed >= 1.8);
      }
    }
  }
}

TEST_CASE("leibniz consistency of product jets") {
  std::mt19937 rng(7121);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int trial = 0; trial < 8; ++trial) {
    auto rz = [&] {
      return GaussianRational(rational_from_double(unif(rng)),
                              rational_from_double(std::abs(unif(rng)) + 0.25));
    };
    UnitBallFunction b1({BlaschkeFactor{rz(), Rational(0)}, PointMassFactor{Rational(2), Rational(1, 3)}});
    UnitBallFunction b2({BlaschkeFactor{rz(), Rational(0)}, ExpInfinityFactor{Rational(1, 8)}});
    std::vector<Factor> all = b1.factors();
    for (const auto& f : b2.factors()) all.push_back(f);
    UnitBallFunction prod(all);

    CDouble w(unif(rng), std::abs(unif(rng)) + 0.3);
    unsigned J = 4;
    auto j1 = derivative_jet(b1, w, J), j2 = derivative_jet(b2, w, J), jp = derivative_jet(prod, w, J);
    for (unsigned j = 0; j <= J; ++j) {
      CDouble conv{};
      for (unsigned k = 0; k <= j; ++k)
        conv += to_double(binomial(j, k)) * j1.values[k] * j2.values[j - k];
      CHECK(std::abs(conv - jp.values[j]) < 1e-9 * std::max(1.0, std::abs(jp.values[j])));
    }
  }
}

TEST_CASE("rho on the real line") {
  CHECK(rho(single_blaschke_at_i(), 0.7) == 0.0);
  UnitBallFunction empty;
  CHECK(rho(empty, 1.0) == 0.0);
  auto b = dip_at_3();
  double m_center = 1.0 - 0.5 * std::exp(-1.0);
  CHECK(std::abs(rho(b, 3.0) - (1.0 - m_center * m_center)) < 1e-15);
  CHECK(rho(b, 0.0) == 0.0);  // off the support
}

TEST_CASE("outer factor: Plemelj boundary value is the limit of interior values") {
  auto b = dip_at_3();
  for (double x : {2.5, 3.0, 3.4, 4.5}) {
    CDouble boundary = eval(b, CDouble(x, 0.0));
    CDouble interior = eval(b, CDouble(x, 1e-7));
    CHECK(std::abs(boundary - interior) < 1e-5);
    CHECK(std::abs(std::abs(boundary) - b.boundary_modulus(x)) < 1e-10);
  }
}

TEST_CASE("exact and floating evaluation agree on Blaschke data") {
  auto b = two_zero_blaschke();
  for (double re : {-1.0, 0.25, 2.0}) {
    for (double im : {0.0, 0.5, 3.0}) {
      GaussianRational z(rational_from_double(re), rational_from_double(im));
      CDouble exact = to_cdouble(eval(b, z));
      CDouble approx = eval(b, CDouble(re, im));
      CHECK(std::abs(exact - approx) < 1e-12);
    }
  }
  // exact path refuses non-exact factors
  CHECK_THROWS_AS(eval(mixed_function(), GaussianRational(Rational(0))), error);
}

TEST_CASE("radial jet extrapolation") {
  std::vector<double> schedule;
  for (int k = 1; k <= 10; ++k) schedule.push_back(std::pow(2.0, -k));

  auto b = two_zero_blaschke();
  auto ex = radial_jet_extrapolate(b, 0.5, 2, schedule);
  auto direct = derivative_jet(b, CDouble(0.5, 0.0), 2);
  for (unsigned j = 0; j <= 2; ++j)
    CHECK(std::abs(ex.jet.values[j] - direct.values[j]) < 1e-10);

  UnitBallFunction empty;
  auto ee = radial_jet_extrapolate(empty, 0.0, 2, schedule);
  CHECK(std::abs(ee.jet.values[0] - CDouble(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(ee.jet.values[1]) < 1e-14);

  UnitBallFunction expf({ExpInfinityFactor{Rational(2)}});
  auto er = radial_jet_extrapolate(expf, 0.0, 1, schedule);
  CHECK(std::abs(er.jet.values[0] - CDouble(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(er.jet.values[1] - CDouble(0.0, 2.0)) < 1e-10);
}

TEST_CASE("function description parsing") {
  auto b = parse_function_string(R"({"factors": [
    {"kind": "blaschke", "zero": ["0", "1"]},
    {"kind": "blaschke", "zero": ["1/2", "3/2"], "phase": "0"},
    {"kind": "point_mass", "location": "-2", "mass": "0.5"},
    {"kind": "exp_infinity", "a": "1"},
    {"kind": "outer_dip", "dips": [{"center": "3", "half_width": "1", "depth": "0.5"}]},
    {"kind": "phase", "alpha": "0.25"}
  ]})");
  CHECK(b.factors().size() == 5);
  CHECK(b.global_phase() == Rational(1, 4));
  CHECK_FALSE(b.inner());
  CHECK_FALSE(b.exact_capable());

  auto exact = parse_function_string(R"({"factors": [{"kind": "blaschke", "zero": ["0", "1"]}]})");
  CHECK(exact.exact_capable());
  CHECK(exact.inner());

  CHECK_THROWS_AS(parse_function_string("not json"), error);
  CHECK_THROWS_AS(parse_function_string(R"({"factors": [{"kind": "wat"}]})"), error);
  CHECK_THROWS_AS(parse_function_string(R"({"factors": [{"kind": "blaschke", "zero": ["0", "-1"]}]})"),
                  error);
}

TEST_CASE("extrapolation error paths") {
  std::vector<double> good_ts = {0.5, 0.25, 0.125};
  std::vector<CDouble> nan_vals = {CDouble(1.0, 0.0),
                                   CDouble(std::numeric_limits<double>::quiet_NaN(), 0.0),
                                   CDouble(1.0, 0.0)};
  CHECK_THROWS_AS(extrapolate_to_zero(good_ts, nan_vals), error);
  CHECK_THROWS_AS(extrapolate_to_zero({0.5}, {CDouble(1.0, 0.0)}), error);
  // schedule must decrease
  UnitBallFunction empty;
  CHECK_THROWS_AS(radial_jet_extrapolate(empty, 0.0, 1, {0.25, 0.5}), error);
}

TEST_CASE("extended precision path rejects quadrature-backed factors") {
  UnitBallFunction dip({OuterDipFactor{{Dip{Rational(3), Rational(1), Rational(1, 2)}}}});
  CHECK_THROWS_AS(derivative_jet(dip, CBig{BigFloat(0), BigFloat(1)}, 1), error);
  // closed-form factors work at extended precision
  UnitBallFunction pm({PointMassFactor{Rational(2), Rational(1)}});
  set_precision_bits(128);
  auto jet = derivative_jet(pm, CBig{BigFloat(0), BigFloat(1)}, 2);
  auto djet = derivative_jet(pm, CDouble(0.0, 1.0), 2);
  for (unsigned j = 0; j <= 2; ++j)
    CHECK(std::abs(field<CBig>::to_cdouble(jet.values[j]) - djet.values[j]) < 1e-13);
}
