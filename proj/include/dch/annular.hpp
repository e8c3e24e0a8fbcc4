#pragma once

#include <cstddef>
#include <vector>

#include "dch/bvp.hpp"

namespace dch {

/// Quasi-stationary outer profile on (r_star, 1]: U_star with U_star(r_star) = 1,
/// U_star'(r_star) = 0, U_star'(1) = 0 and the partial mass S(1) = m0 - r_star^2 / 2.
struct AnnularSolution {
  double r_star = 0.0;
  double mu0 = 0.0;
  double epsilon = 0.0;
  double m0 = 0.0;
  std::vector<double> r;
  std::vector<double> U_star;
  std::vector<double> W;
  std::vector<double> S;
  /// Collocation solution (components S, U, W, mu) for C^1 evaluation.
  bvp::Solution<4> raw;

  /// U_star at any r in [r_star, 1], U_star = 1 for r < r_star.
  double u_star(double radius) const;
  /// S(1) - (m0 - r_star^2 / 2).
  double mass_residual() const;
};

/// Stationary solution of the full problem on [0, 1] with mass m0.
struct StationarySolution {
  std::vector<double> r;
  std::vector<double> U;
  double mu_c = 0.0;
  double epsilon = 0.0;
  bvp::Solution<4> raw;

  /// int_0^1 [eps^2/2 U'^2 + f(U)] r dr by Simpson's rule on the collocation mesh.
  double energy() const;
  /// int_0^1 U r dr on the collocation mesh.
  double mass() const;
};

struct AnnularOptions {
  std::size_t intervals = 4000;
  /// Bracket for the outer iteration on r_star.
  double r_lo = 0.05;
  double r_hi = 0.95;
  double r_guess = 0.25;
  int max_outer = 60;
  int max_newton = 80;
};

/// Collocation solve of the annular system for a prescribed r_star. The mass
/// condition is not imposed; see AnnularSolution::mass_residual.
AnnularSolution solve_annular_at(double epsilon, double m0, double r_star, double tol,
                                 const AnnularOptions& options = {},
                                 const AnnularSolution* guess = nullptr);

/// Annular solution whose r_star also satisfies the mass constraint, found by
/// a safeguarded secant iteration on r_star. Throws TrivialBranch when the
/// only solution is U_star = 1, NoConvergence otherwise.
AnnularSolution solve_annular(double epsilon, double m0, double tol, const AnnularOptions& options = {});

struct StationaryOptions {
  std::size_t intervals = 4000;
  int max_newton = 80;
};

/// Solves -eps^2 (1/r)(r U')' + f'(U) = mu_c, U'(0) = U'(1) = 0, int U r dr = m0.
StationarySolution solve_stationary(double epsilon, double m0, double tol,
                                    const StationaryOptions& options = {});

/// Leading Taylor coefficient of v = 1 - U_star at r_star: mu0 / (2 eps^2).
double taylor_coefficient_b2(const AnnularSolution& solution, double epsilon);

/// Max-norm residual of the second-order stationary ODE
/// -eps^2 (U'' + U'/r) + f'(U) - mu evaluated with the collocation interpolant
/// at `points_per_interval` interior points of every mesh interval.
double stationary_ode_residual(const bvp::Solution<4>& sol, double epsilon, int points_per_interval);

}  // namespace dch
