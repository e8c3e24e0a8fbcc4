#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dch/composite.hpp"
#include "dch/errors.hpp"
#include "dch/specfun.hpp"

namespace {

constexpr double eps = 0.1;
constexpr double m0_default = -0.22969129501265;

const dch::CompositeModel& model4() {
  static const dch::CompositeModel m = [] {
    const auto a = dch::solve_annular(eps, m0_default, 1e-10);
    const auto p = dch::solve_phi0(4.0, 1e-10);
    return dch::build_composite(4.0, eps, a, p);
  }();
  return m;
}

// Minimum of v_comp over the touchdown region by dense sampling in eta.
double composite_min(double t, const dch::CompositeModel& m) {
  const double width = std::pow(t, m.exps.gamma.value()) * m.scale_d;
  double best = 1e300;
  for (int k = -4000; k <= 4000; ++k) {
    const double r = m.r_star + width * 3.0 * k / 4000.0;
    best = std::min(best, dch::evaluate_composite(r, t, m));
  }
  return best;
}

}  // namespace

TEST_CASE("rational arithmetic") {
  const dch::Rational a(2, -4);
  CHECK(a.num() == -1);
  CHECK(a.den() == 2);
  CHECK(a.str() == "-1/2");
  CHECK(a + dch::Rational(1, 3) == dch::Rational(-1, 6));
  CHECK(a - dch::Rational(1, 3) == dch::Rational(-5, 6));
  CHECK(a * dch::Rational(2, 3) == dch::Rational(-1, 3));
  CHECK(dch::Rational(6, 3).str() == "2");
  CHECK(dch::Rational::from_double(-1.0 / 6.0) == dch::Rational(-1, 6));
  CHECK(dch::Rational::from_double(0.4) == dch::Rational(2, 5));
  CHECK_THROWS_AS(dch::Rational::from_double(std::numbers::pi), dch::DomainError);
  CHECK_THROWS_AS(dch::Rational(1, 0), dch::DomainError);
}

TEST_CASE("exponent relations hold exactly") {
  for (double n : {3.0, 3.5, 4.0, 5.0, 7.0}) {
    CAPTURE(n);
    const auto e = dch::exponents(n);
    const dch::Rational nr = dch::Rational::from_double(n);
    CHECK(e.beta == e.gamma + e.gamma);
    CHECK(e.alpha == e.gamma);
    // beta (n - 1) = -1.
    CHECK(e.beta * (nr - dch::Rational(1)) == dch::Rational(-1));
  }
  CHECK(dch::exponents(4.0).alpha == dch::Rational(-1, 6));
  CHECK(dch::exponents(3.0).beta == dch::Rational(-1, 2));
  CHECK(dch::exponents(5.0).gamma == dch::Rational(-1, 8));
  CHECK_THROWS_AS(dch::exponents(2.0), dch::DomainError);
}

TEST_CASE("matching constants for n = 4") {
  const auto& m = model4();
  CHECK(m.matching_defect() < 1e-8);
  CHECK(2.0 * m.b2 == doctest::Approx(m.kappa * m.scale_c / (m.scale_d * m.scale_d)).epsilon(1e-8));
  CHECK(m.c2 > 0.0);
  CHECK(m.J > 0.0);
  // The central profile leaves r_star with slope -a1.
  const double h = 1e-6;
  const double slope = (dch::psi0(m.r_star - 2 * h, m) - dch::psi0(m.r_star - h, m)) / h;
  CHECK(slope == doctest::Approx(m.a1).epsilon(1e-4));
  // Far-left linear growth of the inner profile matches the slope: c / d = a1.
  CHECK(m.scale_c / m.scale_d == doctest::Approx(m.a1).epsilon(1e-10));
  CHECK(dch::psi0(m.r_star + 0.1, m) == 0.0);
  CHECK(dch::psi0(0.0, m) == doctest::Approx(m.c2 * (dch::bessel_i(dch::BesselOrder(0), 2 * m.r_star / eps) - 1.0)));
}

TEST_CASE("matching rejects a profile for another n") {
  const auto a = dch::solve_annular(eps, m0_default, 1e-10);
  const auto p = dch::solve_phi0(5.0, 1e-10);
  CHECK_THROWS_AS(dch::build_composite(4.0, eps, a, p), dch::DomainError);
  const auto m = dch::matching_constants(5.0, eps, a, p.kappa);
  CHECK(m.matching_defect() < 1e-8);
  CHECK_THROWS_AS(dch::evaluate_composite(0.3, 1e13, m), dch::DomainError);
}

TEST_CASE("composite is continuous across r_star and positive") {
  const auto& m = model4();
  for (double t : {1e12, 1e15}) {
    const double below = dch::evaluate_composite(m.r_star - 1e-12, t, m);
    const double above = dch::evaluate_composite(m.r_star + 1e-12, t, m);
    CHECK(above == doctest::Approx(below).epsilon(1e-8));
    for (double r = 0.0; r <= 1.0; r += 0.01) CHECK(dch::evaluate_composite(r, t, m) > 0.0);
  }
  CHECK_THROWS_AS(dch::evaluate_composite(0.5, 0.0, m), dch::DomainError);
}

TEST_CASE("composite log-slopes approach alpha and beta") {
  const auto& m = model4();
  const double t1 = 1e24, t2 = 1e30;
  const double beta_slope = std::log(composite_min(t2, m) / composite_min(t1, m)) / std::log(t2 / t1);
  CHECK(beta_slope == doctest::Approx(m.exps.beta.value()).epsilon(1e-3));
  const double alpha_slope =
      std::log(dch::evaluate_composite(0.0, t2, m) / dch::evaluate_composite(0.0, t1, m)) / std::log(t2 / t1);
  CHECK(alpha_slope == doctest::Approx(m.exps.alpha.value()).epsilon(1e-3));
}

TEST_CASE("comparison against the composite itself") {
  const auto& m = model4();
  const dch::RadialGrid g(2000);
  dch::RadialState s;
  s.time = 1e13;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) s.values.push_back(1.0 - dch::evaluate_composite(g.node(i), 1e13, m));
  const auto e = dch::compare_error(m, s, g);
  CHECK(e.max_abs_error < 1e-15);
  CHECK(e.time == 1e13);

  s.values[700] += 1e-3;
  const auto bumped = dch::compare_error(m, s, g);
  CHECK(bumped.max_abs_error == doctest::Approx(1e-3).epsilon(1e-6));
  CHECK(bumped.location == doctest::Approx(g.node(700)));
}
