#include "dch/annular.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "dch/errors.hpp"
#include "dch/model.hpp"

namespace dch {

namespace {

using Vec4 = bvp::Vec<4>;
using Mat4 = bvp::Mat<4>;

// Components: 0 = S (partial mass), 1 = U, 2 = W = U', 3 = mu (constant).
bvp::Problem<4> stationary_system(double epsilon) {
  const double e2 = epsilon * epsilon;
  bvp::Problem<4> p;
  p.rhs = [e2](double r, const Vec4& y) {
    const double u = y[1];
    const double source = (2.0 * u * (u * u - 1.0) - y[3]) / e2;
    // At the origin W/r -> W'(0), so W' = source / 2.
    const double w_prime = r > 0.0 ? source - y[2] / r : 0.5 * source;
    return Vec4{u * r, y[2], w_prime, 0.0};
  };
  p.jacobian = [e2](double r, const Vec4& y) {
    const double u = y[1];
    Mat4 j{};
    const double factor = r > 0.0 ? 1.0 : 0.5;
    j[0][1] = r;
    j[1][2] = 1.0;
    j[2][1] = factor * 2.0 * (3.0 * u * u - 1.0) / e2;
    j[2][2] = r > 0.0 ? -1.0 / r : 0.0;
    j[2][3] = -factor / e2;
    return j;
  };
  return p;
}

double simpson_weight(std::size_t j, std::size_t count) {
  if (j == 0 || j + 1 == count) return 1.0;
  return j % 2 == 1 ? 4.0 : 2.0;
}

// Composite Simpson on a uniform mesh with an even number of intervals,
// falling back to the trapezoidal rule otherwise.
template <class F>
double integrate_on_mesh(const std::vector<double>& x, F&& g) {
  const std::size_t count = x.size();
  const double h = (x.back() - x.front()) / static_cast<double>(count - 1);
  double sum = 0.0;
  if ((count - 1) % 2 == 0) {
    for (std::size_t j = 0; j < count; ++j) sum += simpson_weight(j, count) * g(j);
    return sum * h / 3.0;
  }
  for (std::size_t j = 0; j < count; ++j) sum += (j == 0 || j + 1 == count ? 0.5 : 1.0) * g(j);
  return sum * h;
}

double max_deviation_from_one(const std::vector<Vec4>& y) {
  double m = 0.0;
  for (const auto& v : y) m = std::max(m, std::abs(v[1] - 1.0));
  return m;
}

}  // namespace

double AnnularSolution::u_star(double radius) const {
  if (radius <= r_star) return 1.0;
  return raw.interpolate(1, std::min(radius, 1.0));
}

double AnnularSolution::mass_residual() const { return S.back() - (m0 - 0.5 * r_star * r_star); }

double StationarySolution::energy() const {
  const double e2 = epsilon * epsilon;
  return integrate_on_mesh(r, [&](std::size_t j) {
    const double w = raw.values[j][2];
    return (0.5 * e2 * w * w + free_energy_terms(U[j]).f) * r[j];
  });
}

double StationarySolution::mass() const {
  return integrate_on_mesh(r, [&](std::size_t j) { return U[j] * r[j]; });
}

AnnularSolution solve_annular_at(double epsilon, double m0, double r_star, double tol,
                                 const AnnularOptions& options, const AnnularSolution* guess) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (!(r_star > 0.0 && r_star < 1.0)) throw DomainError("r_star must lie in (0, 1)");

  bvp::Problem<4> p = stationary_system(epsilon);
  p.num_left = 3;
  p.left = [](const Vec4& y, std::span<double> r, std::span<Vec4> g) {
    r[0] = y[1] - 1.0;
    r[1] = y[2];
    r[2] = y[0];
    g[0] = Vec4{0, 1, 0, 0};
    g[1] = Vec4{0, 0, 1, 0};
    g[2] = Vec4{1, 0, 0, 0};
  };
  p.right = [](const Vec4& y, std::span<double> r, std::span<Vec4> g) {
    r[0] = y[2];
    g[0] = Vec4{0, 0, 1, 0};
  };

  const std::vector<double> mesh = bvp::uniform_mesh(r_star, 1.0, options.intervals);
  std::vector<Vec4> y0;
  if (guess != nullptr) {
    y0.resize(mesh.size());
    for (std::size_t j = 0; j < mesh.size(); ++j) {
      const double r = mesh[j];
      if (r <= guess->r_star) {
        y0[j] = Vec4{0.0, 1.0, 0.0, guess->mu0};
      } else {
        y0[j] = Vec4{0.0, guess->raw.interpolate(1, r), guess->raw.interpolate(2, r), guess->mu0};
      }
    }
  } else {
    // Tanh interface profile: U = -tanh((r - 1/2)/eps), W = -sech^2/eps, mu = 1.
    y0.resize(mesh.size());
    for (std::size_t j = 0; j < mesh.size(); ++j) {
      const double arg = (mesh[j] - 0.5) / epsilon;
      const double sech = 1.0 / std::cosh(arg);
      y0[j] = Vec4{0.0, -std::tanh(arg), -sech * sech / epsilon, 1.0};
    }
  }
  // Partial mass of the guess, trapezoidal.
  for (std::size_t j = 1; j < mesh.size(); ++j)
    y0[j][0] = y0[j - 1][0] + 0.5 * (mesh[j] - mesh[j - 1]) * (y0[j][1] * mesh[j] + y0[j - 1][1] * mesh[j - 1]);

  bvp::CollocationSolver<4> solver(p, mesh);
  bvp::NewtonOptions opt;
  opt.tol = tol;
  opt.max_iter = options.max_newton;
  bvp::Solution<4> sol = solver.solve(std::move(y0), opt);

  if (max_deviation_from_one(sol.values) < 10.0 * tol)
    throw TrivialBranch("annular solve collapsed to U_star = 1");

  AnnularSolution out;
  out.r_star = r_star;
  out.mu0 = sol.values.front()[3];
  out.epsilon = epsilon;
  out.m0 = m0;
  out.r = sol.mesh;
  for (const auto& v : sol.values) {
    out.S.push_back(v[0]);
    out.U_star.push_back(v[1]);
    out.W.push_back(v[2]);
  }
  out.raw = std::move(sol);
  return out;
}

AnnularSolution solve_annular(double epsilon, double m0, double tol, const AnnularOptions& options) {
  if (m0 >= 0.5 - 1e-9)
    throw TrivialBranch("m0 >= 1/2: U_star = 1 with mu0 = 0 satisfies every condition");
  if (m0 <= -0.5 + 1e-9) throw DomainError("m0 <= -1/2 admits no interface solution");

  auto attempt = [&](double r, const AnnularSolution* guess) -> std::optional<AnnularSolution> {
    try {
      return solve_annular_at(epsilon, m0, r, tol, options, guess);
    } catch (const TrivialBranch&) {
      if (guess == nullptr) return std::nullopt;
      try {
        return solve_annular_at(epsilon, m0, r, tol, options, nullptr);
      } catch (const Error&) {
        return std::nullopt;
      }
    } catch (const NoConvergence&) {
      if (guess == nullptr) return std::nullopt;
      try {
        return solve_annular_at(epsilon, m0, r, tol, options, nullptr);
      } catch (const Error&) {
        return std::nullopt;
      }
    }
  };

  double r0 = options.r_guess;
  auto s0 = attempt(r0, nullptr);
  if (!s0) throw NoConvergence("annular solve failed at the initial r_star");
  if (s0->mu0 <= 0.0) throw TrivialBranch("annular solution has mu0 <= 0");
  double r1 = std::clamp(r0 + 0.01, options.r_lo, options.r_hi);
  auto s1 = attempt(r1, &*s0);
  if (!s1) throw NoConvergence("annular solve failed at the second r_star");

  double g0 = s0->mass_residual();
  double g1 = s1->mass_residual();
  double lo = options.r_lo, hi = options.r_hi;
  for (int it = 0; it < options.max_outer; ++it) {
    if (std::abs(g1) < tol) {
      if (s1->mu0 <= 0.0) throw TrivialBranch("annular solution has mu0 <= 0");
      return std::move(*s1);
    }
    // Maintain a bracket once the residual changes sign.
    if (g0 * g1 < 0.0) {
      lo = std::min(r0, r1);
      hi = std::max(r0, r1);
    }
    double r2 = g1 != g0 ? r1 - g1 * (r1 - r0) / (g1 - g0) : 0.5 * (lo + hi);
    if (!(r2 > lo && r2 < hi)) r2 = 0.5 * (lo + hi);
    auto s2 = attempt(r2, &*s1);
    if (!s2) {
      r2 = 0.5 * (r1 + r2);
      s2 = attempt(r2, &*s1);
      if (!s2) throw NoConvergence("annular solve failed during the r_star iteration");
    }
    r0 = r1;
    g0 = g1;
    s0 = std::move(s1);
    r1 = r2;
    g1 = s2->mass_residual();
    s1 = std::move(s2);
    if (std::abs(r1 - r0) < 1e-14) break;
  }
  if (std::abs(g1) < 1e3 * tol && s1->mu0 > 0.0) return std::move(*s1);
  throw NoConvergence("r_star iteration did not satisfy the mass constraint");
}

StationarySolution solve_stationary(double epsilon, double m0, double tol, const StationaryOptions& options) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (!(std::abs(m0) < 0.5)) throw DomainError("|m0| must be below 1/2");

  bvp::Problem<4> p = stationary_system(epsilon);
  p.num_left = 2;
  p.left = [](const Vec4& y, std::span<double> r, std::span<Vec4> g) {
    r[0] = y[0];
    r[1] = y[2];
    g[0] = Vec4{1, 0, 0, 0};
    g[1] = Vec4{0, 0, 1, 0};
  };
  p.right = [m0](const Vec4& y, std::span<double> r, std::span<Vec4> g) {
    r[0] = y[2];
    r[1] = y[0] - m0;
    g[0] = Vec4{0, 0, 1, 0};
    g[1] = Vec4{1, 0, 0, 0};
  };

  const std::vector<double> mesh = bvp::uniform_mesh(0.0, 1.0, options.intervals);
  // Interface placed where a sharp +-1 profile carries mass m0.
  const double r_int = std::sqrt(std::clamp(m0 + 0.5, 0.01, 0.99));
  std::vector<Vec4> y0(mesh.size());
  for (std::size_t j = 0; j < mesh.size(); ++j) {
    const double arg = (mesh[j] - r_int) / epsilon;
    const double sech = 1.0 / std::cosh(arg);
    y0[j] = Vec4{0.0, -std::tanh(arg), -sech * sech / epsilon, 0.0};
  }
  for (std::size_t j = 1; j < mesh.size(); ++j)
    y0[j][0] = y0[j - 1][0] + 0.5 * (mesh[j] - mesh[j - 1]) * (y0[j][1] * mesh[j] + y0[j - 1][1] * mesh[j - 1]);

  bvp::CollocationSolver<4> solver(p, mesh);
  bvp::NewtonOptions opt;
  opt.tol = tol;
  opt.max_iter = options.max_newton;
  bvp::Solution<4> sol = solver.solve(std::move(y0), opt);

  StationarySolution out;
  out.mu_c = sol.values.front()[3];
  out.epsilon = epsilon;
  out.r = sol.mesh;
  for (const auto& v : sol.values) out.U.push_back(v[1]);
  out.raw = std::move(sol);
  return out;
}

double taylor_coefficient_b2(const AnnularSolution& solution, double epsilon) {
  return solution.mu0 / (2.0 * epsilon * epsilon);
}

double stationary_ode_residual(const bvp::Solution<4>& sol, double epsilon, int points_per_interval) {
  const double e2 = epsilon * epsilon;
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < sol.mesh.size(); ++k) {
    const double a = sol.mesh[k];
    const double b = sol.mesh[k + 1];
    for (int q = 1; q <= points_per_interval; ++q) {
      const double r = a + (b - a) * q / (points_per_interval + 1.0);
      const double u = sol.interpolate(1, r);
      const double w = sol.interpolate(2, r);
      const double dw = sol.interpolate_derivative(2, r);
      const double mu = sol.interpolate(3, r);
      const double res = -e2 * (dw + w / r) + 2.0 * u * (u * u - 1.0) - mu;
      worst = std::max(worst, std::abs(res));
    }
  }
  return worst;
}

}  // namespace dch
