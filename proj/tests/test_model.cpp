#include <doctest.h>

#include <cmath>
#include <functional>

#include "dch/diagnostics.hpp"
#include "dch/errors.hpp"
#include "dch/model.hpp"

namespace {

// Adaptive Simpson, independent of the grid quadrature.
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return simpson(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 60);
}

double exact_initial_mass(double eps) {
  return integrate([eps](double r) { return -0.95 * std::tanh((r - 0.5) / eps) * r; }, 0.0, 1.0, 1e-14);
}

}  // namespace

TEST_CASE("grid nodes and control-volume weights") {
  const dch::RadialGrid g(10);
  CHECK(g.num_nodes() == 11);
  CHECK(g.node(10) == doctest::Approx(1.0));
  CHECK(g.weight(0) == doctest::Approx(0.01 / 8.0));
  CHECK(g.weight(3) == doctest::Approx(0.3 * 0.1));
  CHECK(g.weight(10) == doctest::Approx(0.95 * 0.1 / 2.0));
  double total = 0.0;
  for (double w : g.weights()) total += w;
  // Sum of the weights is 1/2 - dr^2/8, which the constant state's mass inherits.
  CHECK(total == doctest::Approx(0.5 - 0.01 / 8.0).epsilon(1e-14));
  CHECK_THROWS_AS(dch::RadialGrid(1), dch::DomainError);
}

TEST_CASE("double well and its derivatives") {
  for (double u : {-1.3, -1.0, -0.4, 0.0, 0.2, 0.9, 1.0, 1.1}) {
    const auto t = dch::free_energy_terms(u);
    CHECK(t.f == doctest::Approx(0.5 * (1 - u * u) * (1 - u * u)));
    const double h = 1e-5;
    const double fd = (dch::free_energy_terms(u + h).f - dch::free_energy_terms(u - h).f) / (2 * h);
    CHECK(t.f_prime == doctest::Approx(fd).epsilon(1e-8));
    const double fd2 =
        (dch::free_energy_terms(u + h).f_prime - dch::free_energy_terms(u - h).f_prime) / (2 * h);
    CHECK(dch::free_energy_second_derivative(u) == doctest::Approx(fd2).epsilon(1e-8));
  }
  CHECK(dch::free_energy_terms(1.0).f_prime == 0.0);
  CHECK(dch::free_energy_terms(-1.0).f_prime == 0.0);
}

TEST_CASE("mobility values, derivatives and domain") {
  dch::ModelParams p;
  p.n = 4.0;
  CHECK(dch::mobility(0.5, p) == doctest::Approx(std::pow(0.75, 4)));
  CHECK(dch::mobility(1.0, p) == 0.0);
  p.n = 0.0;
  CHECK(dch::mobility(0.99, p) == 1.0);
  CHECK(dch::mobility_derivative(0.3, p) == 0.0);

  for (double n : {1.0, 2.5, 3.0, 4.0, 5.0}) {
    p.n = n;
    p.mobility_variant = dch::MobilityVariant::plain;
    for (double u : {-0.8, -0.1, 0.35, 0.7}) {
      const double h = 1e-6;
      const double fd = (dch::mobility(u + h, p) - dch::mobility(u - h, p)) / (2 * h);
      CHECK(dch::mobility_derivative(u, p) == doctest::Approx(fd).epsilon(1e-6));
    }
  }

  p.n = 2.5;
  CHECK_THROWS_AS(dch::mobility(1.01, p), dch::DomainError);
  CHECK_THROWS_AS(dch::mobility_derivative(-1.01, p), dch::DomainError);
  p.mobility_variant = dch::MobilityVariant::truncated;
  CHECK(dch::mobility(1.01, p) == 0.0);
  p.mobility_variant = dch::MobilityVariant::absolute;
  CHECK(dch::mobility(1.01, p) == doctest::Approx(std::pow(std::abs(1 - 1.01 * 1.01), 2.5)));
  // Integer n extends as a polynomial.
  p.n = 3.0;
  p.mobility_variant = dch::MobilityVariant::plain;
  CHECK(dch::mobility(1.1, p) == doctest::Approx(std::pow(1 - 1.21, 3)));
}

TEST_CASE("mobility variant names round trip") {
  for (auto v : {dch::MobilityVariant::plain, dch::MobilityVariant::truncated, dch::MobilityVariant::absolute})
    CHECK(dch::parse_mobility_variant(dch::to_string(v)) == v);
  CHECK_THROWS_AS(dch::parse_mobility_variant("quadratic"), dch::ConfigError);
}

TEST_CASE("model parameter validation") {
  dch::ModelParams p;
  CHECK_NOTHROW(p.validate());
  p.epsilon = 0.0;
  CHECK_THROWS_AS(p.validate(), dch::DomainError);
  p.epsilon = 0.1;
  p.n = -1.0;
  CHECK_THROWS_AS(p.validate(), dch::DomainError);
}

TEST_CASE("tanh initial profile") {
  const dch::RadialGrid g(200);
  const auto s = dch::initial_profile(g, 0.1);
  CHECK(s.time == 0.0);
  REQUIRE(s.values.size() == 201);
  for (std::size_t i = 0; i <= 200; i += 17)
    CHECK(s.values[i] == doctest::Approx(-0.95 * std::tanh((g.node(i) - 0.5) / 0.1)));
  const auto v = s.distance_from_upper();
  CHECK(v[0] == doctest::Approx(1.0 - s.values[0]));

  dch::InitialProfileOptions o;
  o.clamp_endpoints = true;
  const auto c = dch::initial_profile(g, 0.1, o);
  CHECK(c.values.front() == 1.0);
  CHECK(c.values.back() == -1.0);
  o.center = 1.0;
  CHECK_THROWS_AS(dch::initial_profile(g, 0.1, o), dch::DomainError);
}

TEST_CASE("discrete mass of the initial data converges at second order") {
  const double exact = exact_initial_mass(0.1);
  CHECK(exact == doctest::Approx(-0.2297).epsilon(1e-3));
  double prev = 0.0;
  for (std::size_t N : {100, 200, 400, 800}) {
    const dch::RadialGrid g(N);
    const double err = std::abs(dch::mass(dch::initial_profile(g, 0.1), g) - exact);
    CHECK(err < 0.2 * g.spacing() * g.spacing());
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.1));
    prev = err;
  }
}
