#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "dch/errors.hpp"
#include "dch/similarity.hpp"

namespace {

std::vector<std::pair<double, double>> power_law(double c, double p, double t0, double t1, int per_decade) {
  std::vector<std::pair<double, double>> out;
  const int count = static_cast<int>(std::lround(std::log10(t1 / t0) * per_decade));
  for (int k = 0; k <= count; ++k) {
    const double t = t0 * std::pow(10.0, static_cast<double>(k) / per_decade);
    out.emplace_back(t, c * std::pow(t, p));
  }
  return out;
}

// Synthetic self-similar states v = A(t) F((r - R)/W(t)) with F(x) = 1 + x^2.
dch::RadialState similar_state(double t, const dch::RadialGrid& g) {
  const double a = std::pow(t, -1.0 / 3.0), w = 0.05 * std::pow(t, -1.0 / 6.0);
  dch::RadialState s;
  s.time = t;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    const double x = (g.node(i) - 0.25) / w;
    s.values.push_back(1.0 - a * (1.0 + x * x));
  }
  return s;
}

dch::DiagnosticsSeries synthetic_diagnostics(double alpha, double beta, bool with_onset) {
  dch::DiagnosticsSeries d;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k <= 12 * 8; ++k) {
    const double t = std::pow(10.0, k / 8.0);
    dch::DiagnosticsRow r{t, -0.23, 0.1, -1e-3, 0.5 * std::pow(t, alpha), 0.25, 0.2 * std::pow(t, beta), 1.0};
    if (with_onset && k < 10) r.rbar = r.vmin = r.d2v = nan;
    d.append(r);
  }
  return d;
}

}  // namespace

TEST_CASE("log slope of exact power laws") {
  const auto data = power_law(3.0, -1.0 / 6.0, 1.0, 1e6, 8);
  const auto s = dch::log_slope(data, 8);
  CHECK(s.window == 8);
  REQUIRE(s.points.size() == data.size() - 16);
  for (const auto& p : s.points) CHECK(p.sigma == doctest::Approx(-1.0 / 6.0).epsilon(1e-12));
  CHECK(s.points.front().s == doctest::Approx(std::log(data[8].first)));
}

TEST_CASE("log slope of a product of two powers follows the local exponent") {
  // y = t^-1/4 (1 + t)^(1/12): slope -1/4 + t/(12(1+t)).
  std::vector<std::pair<double, double>> data;
  for (int k = 0; k <= 160; ++k) {
    const double t = std::pow(10.0, -4.0 + k / 16.0);
    data.emplace_back(t, std::pow(t, -0.25) * std::pow(1.0 + t, 1.0 / 12.0));
  }
  const auto s = dch::log_slope(data, 2);
  for (const auto& p : s.points) {
    const double t = std::exp(p.s);
    CHECK(p.sigma == doctest::Approx(-0.25 + t / (12.0 * (1.0 + t))).epsilon(2e-3));
  }
}

TEST_CASE("log slope input checks") {
  auto data = power_law(1.0, 1.0, 1.0, 100.0, 8);
  CHECK_THROWS_AS(dch::log_slope(std::span(data).first(10), 8), dch::DomainError);
  data[3].second = 0.0;
  CHECK_THROWS_AS(dch::log_slope(data, 2), dch::NonPositiveData);
  data[3].second = 1.0;
  data[4].first = data[3].first;
  CHECK_THROWS_AS(dch::log_slope(data, 2), dch::DomainError);
}

TEST_CASE("exponent plateaus of synthetic diagnostics") {
  const auto d = synthetic_diagnostics(-1.0 / 6.0, -1.0 / 3.0, true);
  const auto e = dch::estimate_exponents(d);
  CHECK(e.alpha_hat == doctest::Approx(-1.0 / 6.0).epsilon(1e-10));
  CHECK(e.beta_hat == doctest::Approx(-1.0 / 3.0).epsilon(1e-10));
  CHECK(e.gamma_hat == doctest::Approx(-1.0 / 6.0).epsilon(1e-10));
  CHECK(e.min_sigma == doctest::Approx(-1.0 / 6.0).epsilon(1e-10));
  // Rows before the minimum forms are left out of both series.
  CHECK(e.sigma.points.size() == d.size() - 10 - 16);
}

TEST_CASE("no plateau is reported") {
  dch::DiagnosticsSeries d;
  for (int k = 0; k <= 80; ++k) {
    const double t = std::pow(10.0, k / 8.0);
    const double l = std::log(t);
    d.append({t, 0, 0, 0, std::exp(0.05 * l * l), 0.25, std::exp(-0.3 * l), 1.0});
  }
  CHECK_THROWS_AS(dch::estimate_exponents(d), dch::PlateauNotReached);
}

TEST_CASE("touchdown collapse of self-similar states") {
  const dch::RadialGrid g(20000);
  std::vector<dch::RadialState> snaps;
  for (double t : {1e2, 1e3, 1e4}) snaps.push_back(similar_state(t, g));
  const auto curves = dch::collapse_touchdown(snaps, g);
  REQUIRE(curves.size() == 3);
  for (const auto& c : curves) {
    // F(x) = 3 at x = sqrt(2), so w(rho) = 1 + 2 rho^2.
    for (std::size_t k = 0; k < c.abscissa.size(); k += 97) {
      const double rho = c.abscissa[k];
      if (std::abs(rho) < 5.0) CHECK(c.ordinate[k] == doctest::Approx(1.0 + 2.0 * rho * rho).epsilon(1e-3));
    }
  }
  CHECK(dch::collapse_spread(curves, -2.0, 2.0) < 1e-3);
  CHECK(curves[1].time_label == 1e3);
}

TEST_CASE("central collapse and missing crossing") {
  const dch::RadialGrid g(400);
  std::vector<dch::RadialState> snaps;
  for (double t : {1.0, 10.0}) {
    dch::RadialState s;
    s.time = t;
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
      const double r = g.node(i);
      s.values.push_back(1.0 - std::pow(t, -1.0 / 6.0) * (0.05 + (r - 0.3) * (r - 0.3)));
    }
    snaps.push_back(s);
  }
  const auto central = dch::collapse_central(snaps, g);
  CHECK(dch::collapse_spread(central, 0.0, 0.3) < 1e-12);
  CHECK(central[0].ordinate.front() == 1.0);

  dch::RadialState flat;
  flat.time = 1.0;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) flat.values.push_back(0.9 - 0.01 * std::pow(g.node(i) - 0.9, 2));
  std::vector<dch::RadialState> one{flat};
  CHECK_THROWS_AS(dch::collapse_touchdown(one, g), dch::NoCrossing);
}
