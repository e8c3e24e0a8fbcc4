#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dch/diagnostics.hpp"
#include "dch/model.hpp"

namespace dch {

struct SolverConfig {
  /// Max-norm of the Newton correction at which an implicit step is converged.
  double newton_tol = 1e-11;
  int newton_max_iter = 30;
  /// Largest Newton correction applied per iteration (damping).
  double newton_max_update = 0.25;
  /// Step-doubling tolerance on max |u_small - u_big| / max |u|.
  double time_tol = 1e-7;
  double dt_init = 1e-10;
  double dt_max_growth = 2.0;
  double dt_min = 1e-18;
  /// Halt when min v falls below this value.
  double touchdown_tol = 1e-13;
  /// Diagnostics rows per decade of t, starting at first_output_time.
  int outputs_per_decade = 32;
  double first_output_time = 1e-8;
  std::size_t max_steps = 10'000'000;

  /// Throws DomainError for non-positive tolerances or dt_min >= dt_init.
  void validate() const;
};

/// Second-order discretisation of (1/r) d/dr (r du/dr) with the symmetric
/// limit at r = 0 and a mirror ghost node at r = 1.
std::vector<double> radial_laplacian(std::span<const double> u, const RadialGrid& grid);

/// mu_i = -eps^2 L_h(u)_i + f'(u_i).
std::vector<double> chemical_potential(const RadialState& state, const ModelParams& params,
                                       const RadialGrid& grid);

/// Semi-discrete right-hand side du/dt = -(1/w_i)(F_{i+1/2} - F_{i-1/2}),
/// F = -r M(u_mid) d mu/dr at half nodes, zero at both ends.
std::vector<double> semi_discrete_rhs(std::span<const double> u, const ModelParams& params,
                                      const RadialGrid& grid);

struct ImplicitStepResult {
  RadialState state;
  int newton_iters;
};

/// One backward Euler step solved by damped Newton on the coupled (u, mu)
/// system, whose analytic Jacobian is banded with three sub- and three
/// super-diagonals. Throws NewtonDivergence when the u correction does not
/// fall below newton_tol within newton_max_iter iterations.
ImplicitStepResult implicit_euler_step(const RadialState& state, double dt, const ModelParams& params,
                                       const RadialGrid& grid, const SolverConfig& config);

struct StepOutcome {
  RadialState state;
  double dt_used;
  double dt_next;
  int newton_iters;
  double error_estimate;
};

enum class TouchdownKind { reached_threshold, crossed_one };

struct TouchdownEvent {
  double time;
  double radius;
  TouchdownKind kind;
};

/// First node with v <= touchdown_tol or u > 1, located at sub-grid accuracy
/// by a parabola through the extremum of u and its neighbours.
std::optional<TouchdownEvent> detect_touchdown(const RadialState& state, const RadialGrid& grid,
                                               double touchdown_tol);

struct AdvanceHooks {
  /// Called after every accepted step.
  std::function<void(const StepOutcome&)> on_step;
  /// Called with the state at each requested snapshot time.
  std::function<void(const RadialState&)> on_snapshot;
  std::vector<double> snapshot_times;
};

struct AdvanceResult {
  RadialState state;
  std::optional<TouchdownEvent> touchdown;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  double dt_next = 0.0;
};

/// Integrates to t_end with step doubling: one step of dt against two of
/// dt/2, keeping the two-half-step result. Every output time is hit exactly;
/// diagnostics rows are appended to `sink` on a logarithmic schedule.
/// Stops early on a touchdown event. Throws StepSizeUnderflow if dt < dt_min.
AdvanceResult adaptive_advance(RadialState state, double t_end, const ModelParams& params,
                               const RadialGrid& grid, const SolverConfig& config,
                               DiagnosticsSeries& sink, const AdvanceHooks& hooks = {});

/// Times t_first * 10^(k / per_decade) up to and including t_last.
std::vector<double> log_spaced_times(double t_first, double t_last, int per_decade);

}  // namespace dch
