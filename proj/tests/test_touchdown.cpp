#include <doctest.h>

#include <cmath>

#include "dch/errors.hpp"
#include "dch/touchdown.hpp"

namespace {

// phi^n phi''' - 1 for a far-field expansion, phi''' by central differences of phi''.
double far_field_defect(const dch::FarFieldExpansion& e, double y) {
  const double h = 1e-4 * std::max(1.0, std::abs(y));
  const double d3 = (dch::far_field_eval(e, y + h).phi_double_prime - dch::far_field_eval(e, y - h).phi_double_prime) /
                    (2 * h);
  return std::pow(dch::far_field_eval(e, y).phi, e.n) * d3 - 1.0;
}

}  // namespace

TEST_CASE("far-field expansions solve the equation to leading order") {
  for (double n : {3.0, 4.0, 5.0}) {
    CAPTURE(n);
    const auto left = dch::left_far_field(n, 0.7);
    CHECK(left.side == dch::FarFieldSide::left);
    CHECK(left.correction_exponent() == doctest::Approx(3.0 - n));
    // Linear growth with unit slope far to the left.
    const auto v = dch::far_field_eval(left, -400.0);
    CHECK(v.phi_prime == doctest::Approx(-1.0).epsilon(1e-2));
    // Next order of phi^n phi''' - 1 is n xi / x, xi the correction to phi = x.
    const double x = 60.0 + 0.7;
    const double xi = n == 3.0 ? -0.5 * std::log(x) : std::pow(x, 3.0 - n) / ((n - 1) * (n - 2) * (n - 3));
    CHECK(std::abs(far_field_defect(left, -60.0)) < 2.0 * n * std::abs(xi) / x);
    CHECK(std::abs(far_field_defect(left, -400.0)) < std::abs(far_field_defect(left, -60.0)));

    const auto right = dch::right_far_field(n, 2.2, -0.3, 0.5);
    // phi''' ~ y^(-2n) is below the roundoff of differenced phi'' here, so the
    // correction is checked against its defining relation instead.
    const double K = right.right_correction_coefficient();
    const double m = 3.0 - 2.0 * n;
    CHECK(K * m * (m - 1.0) * (m - 2.0) == doctest::Approx(std::pow(2.2, -n)).epsilon(1e-12));
    for (double y : {10.0, 40.0}) {
      const auto w = dch::far_field_eval(right, y);
      CHECK(w.phi == doctest::Approx(2.2 * y * y - 0.3 * y + 0.5 + K * std::pow(y, m)).epsilon(1e-14));
      CHECK(w.phi_prime == doctest::Approx(4.4 * y - 0.3 + K * m * std::pow(y, m - 1.0)).epsilon(1e-14));
      CHECK(w.phi_double_prime == doctest::Approx(4.4 + K * m * (m - 1.0) * std::pow(y, m - 2.0)).epsilon(1e-14));
    }
    CHECK(dch::far_field_eval(right, 300.0).phi_double_prime == doctest::Approx(4.4).epsilon(1e-6));
  }
}

TEST_CASE("far-field domain errors") {
  CHECK_THROWS_AS(dch::left_far_field(2.0), dch::DomainError);
  CHECK_THROWS_AS(dch::right_far_field(1.5, 1.0, 0.0, 0.0), dch::DomainError);
  CHECK_THROWS_AS(dch::right_far_field(4.0, 0.0, 0.0, 0.0), dch::DomainError);
}

TEST_CASE("n = 4 connecting orbit") {
  const auto p = dch::solve_phi0(4.0, 1e-10);
  CHECK(p.node_residual() < 1e-8);
  CHECK(p.kappa > 0.0);
  CHECK(p.kappa_min > 0.0);
  for (double v : p.phi) REQUIRE(v > 0.0);
  // Minimum at the origin of the translated mesh.
  CHECK(std::abs(p.eval(0.0).phi_prime) < 1e-8);
  CHECK(p.eval(-1.0).phi > p.eval(0.0).phi);
  CHECK(p.eval(1.0).phi > p.eval(0.0).phi);
  CHECK(p.left_tail_exponent(20.0, 100.0) == doctest::Approx(-1.0).epsilon(0.05));
  CHECK(p.fitted_quadratic_coefficient() == doctest::Approx(0.5 * p.kappa).epsilon(1e-3));
  // Interpolant and far fields meet continuously at the mesh ends.
  const double y_end = p.mesh.back();
  CHECK(p.eval(y_end + 1e-9).phi == doctest::Approx(p.eval(y_end - 1e-9).phi).epsilon(1e-8));
}

TEST_CASE("kappa is stable under domain doubling and mesh halving") {
  const auto base = dch::solve_phi0(4.0, 1e-10);
  dch::TouchdownOptions wide;
  wide.L = 2.0 * base.truncation;
  wide.L_plus = 400.0;
  const auto doubled = dch::solve_phi0(4.0, 1e-10, wide);
  CHECK(std::abs(doubled.kappa / base.kappa - 1.0) < 1e-4);

  dch::TouchdownOptions fine;
  fine.intervals = 2 * (base.mesh.size() - 1);
  const auto halved = dch::solve_phi0(4.0, 1e-10, fine);
  CHECK(std::abs(halved.kappa / base.kappa - 1.0) < 1e-4);

  dch::TouchdownOptions shifted;
  shifted.left_offset = 1.0;
  const auto moved = dch::solve_phi0(4.0, 1e-10, shifted);
  CHECK(std::abs(moved.kappa / base.kappa - 1.0) < 1e-6);
}

TEST_CASE("neighbouring degeneracies") {
  const auto p5 = dch::solve_phi0(5.0, 1e-10);
  CHECK(p5.node_residual() < 1e-7);
  CHECK(p5.left_tail_exponent(20.0, 100.0) == doctest::Approx(-2.0).epsilon(0.05));
  const auto p3 = dch::solve_phi0(3.0, 1e-10);
  CHECK(p3.kappa > 0.0);
  CHECK(p3.kappa < p5.kappa);
  CHECK(dch::default_truncation(3.0) > dch::default_truncation(4.0));
}
