#include <doctest.h>

#include <array>
#include <cmath>

#include "dch/annular.hpp"
#include "dch/errors.hpp"

namespace {

constexpr double eps = 0.1;

// Mass of the default tanh data, -0.95 int_0^1 tanh((r - 1/2)/eps) r dr.
double default_mass() {
  const int n = 20000;
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double r = static_cast<double>(k) / n;
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    sum += w * -0.95 * std::tanh((r - 0.5) / eps) * r;
  }
  return sum / (3.0 * n);
}

struct Shot {
  double U1;
  double W1;
  double mass;
  bool blew_up;
  double direction;
};

// RK4 shooting from r_star with U = 1, U' = 0 for a given mu; the partial
// mass rides along as a third component.
Shot shoot(double r_star, double mu, int steps) {
  const double e2 = eps * eps;
  auto f = [&](double r, const std::array<double, 3>& y) {
    const double src = (2.0 * y[0] * (y[0] * y[0] - 1.0) - mu) / e2;
    return std::array<double, 3>{y[1], src - y[1] / r, y[0] * r};
  };
  std::array<double, 3> y{1.0, 0.0, 0.0};
  const double h = (1.0 - r_star) / steps;
  for (int k = 0; k < steps; ++k) {
    const double r = r_star + k * h;
    auto add = [](const std::array<double, 3>& a, const std::array<double, 3>& b, double s) {
      return std::array<double, 3>{a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]};
    };
    const auto k1 = f(r, y);
    const auto k2 = f(r + 0.5 * h, add(y, k1, 0.5 * h));
    const auto k3 = f(r + 0.5 * h, add(y, k2, 0.5 * h));
    const auto k4 = f(r + h, add(y, k3, h));
    for (int c = 0; c < 3; ++c) y[c] += h / 6.0 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
    if (std::abs(y[0]) > 3.0) return {y[0], y[1], y[2], true, y[1] > 0 ? 1.0 : -1.0};
  }
  return {y[0], y[1], y[2], false, y[1] > 0 ? 1.0 : -1.0};
}

// Bisection on mu for U'(1) = 0; larger mu bends the trajectory downwards.
double shoot_mu(double r_star, int steps) {
  double lo = 0.01, hi = 0.5;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const Shot s = shoot(r_star, mid, steps);
    const double sign = s.blew_up ? s.direction : (s.W1 > 0 ? 1.0 : -1.0);
    (sign > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("annular solution for the default data") {
  const double m0 = default_mass();
  const auto a = dch::solve_annular(eps, m0, 1e-10);
  CHECK(a.r_star == doctest::Approx(0.2516).epsilon(0.002 / 0.2516));
  CHECK(a.mu0 > 0.0);
  CHECK(std::abs(a.mass_residual()) < 1e-9);
  CHECK(a.U_star.front() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(a.W.front()) < 1e-10);
  CHECK(std::abs(a.W.back()) < 1e-10);
  CHECK(dch::stationary_ode_residual(a.raw, eps, 4) < 1e-8);
  CHECK(a.u_star(0.1) == 1.0);
  CHECK(a.u_star(1.0) == doctest::Approx(a.U_star.back()));
}

TEST_CASE("independent shooting reproduces mu0, U_star(1) and the mass") {
  const double m0 = default_mass();
  const auto a = dch::solve_annular(eps, m0, 1e-10);
  const int steps = 60000;
  const double mu = shoot_mu(a.r_star, steps);
  CHECK(mu == doctest::Approx(a.mu0).epsilon(1e-6));
  // Re-shoot with the collocation mu; only the end values are compared.
  const Shot s = shoot(a.r_star, mu, steps);
  REQUIRE_FALSE(s.blew_up);
  CHECK(std::abs(s.U1 - a.U_star.back()) < 1e-6);
  CHECK(std::abs(s.W1) < 1e-6 * (1.0 / eps));
  CHECK(std::abs(s.mass + 0.5 * a.r_star * a.r_star - m0) < 1e-6);
}

TEST_CASE("Taylor coefficient b2 matches a quadratic fit at r_star") {
  const auto a = dch::solve_annular(eps, default_mass(), 1e-10);
  const double b2 = dch::taylor_coefficient_b2(a, eps);
  CHECK(b2 == doctest::Approx(a.mu0 / (2 * eps * eps)));
  // Least squares of (1 - U)/s^2 = b2 + c s over small s, extrapolated to s = 0.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t j = 1; j < a.r.size(); ++j) {
    const double s = a.r[j] - a.r_star;
    if (s > 2e-3) break;
    const double y = (1.0 - a.U_star[j]) / (s * s);
    sx += s;
    sy += y;
    sxx += s * s;
    sxy += s * y;
    ++count;
  }
  REQUIRE(count >= 5);
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / count;
  CHECK(intercept == doctest::Approx(b2).epsilon(1e-3));
}

TEST_CASE("r_star increases with the mass") {
  double prev = 0.0;
  for (double m0 : {-0.3, -0.23, -0.15, -0.05}) {
    const auto a = dch::solve_annular(eps, m0, 1e-10);
    CHECK(a.r_star > prev);
    CHECK(a.mu0 > 0.0);
    prev = a.r_star;
  }
}

TEST_CASE("limits of the mass range") {
  CHECK_THROWS_AS(dch::solve_annular(eps, 0.5, 1e-10), dch::TrivialBranch);
  CHECK_THROWS_AS(dch::solve_annular(eps, -0.5, 1e-10), dch::DomainError);
  CHECK_THROWS_AS(dch::solve_annular_at(0.0, -0.2, 0.25, 1e-10), dch::DomainError);
  CHECK_THROWS_AS(dch::solve_annular_at(eps, -0.2, 1.2, 1e-10), dch::DomainError);
}

TEST_CASE("stationary solution with the same mass") {
  const double m0 = default_mass();
  const auto st = dch::solve_stationary(eps, m0, 1e-10);
  CHECK(st.mass() == doctest::Approx(m0).epsilon(1e-10));
  CHECK(dch::stationary_ode_residual(st.raw, eps, 4) < 1e-8);
  // Curvature pushes the inner phase above 1 by O(eps).
  CHECK(st.U.front() > 1.0);
  CHECK(st.U.front() < 1.0 + eps);
  CHECK(st.mu_c > 0.0);
  CHECK(st.energy() > 0.0);
  CHECK_THROWS_AS(dch::solve_stationary(eps, 0.6, 1e-10), dch::DomainError);
}
