#include "dch/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "dch/banded.hpp"
#include "dch/errors.hpp"

namespace dch {

void SolverConfig::validate() const {
  if (!(newton_tol > 0.0) || !(time_tol > 0.0) || !(dt_init > 0.0) || !(dt_min > 0.0) ||
      !(touchdown_tol > 0.0) || !(newton_max_update > 0.0))
    throw DomainError("solver tolerances must be strictly positive");
  if (!(dt_min < dt_init)) throw DomainError("dt_min must be smaller than dt_init");
  if (!(dt_max_growth >= 1.0)) throw DomainError("dt_max_growth must be at least 1");
  if (newton_max_iter < 1) throw DomainError("newton_max_iter must be positive");
  if (outputs_per_decade < 1) throw DomainError("outputs_per_decade must be positive");
}

std::vector<double> radial_laplacian(std::span<const double> u, const RadialGrid& grid) {
  const std::size_t nn = grid.num_nodes();
  const double dr = grid.spacing();
  std::vector<double> lap(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    double flux = 0.0;
    if (i + 1 < nn) flux += grid.half_node(i) * (u[i + 1] - u[i]);
    if (i > 0) flux -= grid.half_node(i - 1) * (u[i] - u[i - 1]);
    lap[i] = flux / (dr * grid.weight(i));
  }
  return lap;
}

std::vector<double> chemical_potential(const RadialState& state, const ModelParams& params,
                                       const RadialGrid& grid) {
  const double eps2 = params.epsilon * params.epsilon;
  std::vector<double> mu = radial_laplacian(state.values, grid);
  for (std::size_t i = 0; i < mu.size(); ++i)
    mu[i] = -eps2 * mu[i] + free_energy_terms(state.values[i]).f_prime;
  return mu;
}

std::vector<double> semi_discrete_rhs(std::span<const double> u, const ModelParams& params,
                                      const RadialGrid& grid) {
  const std::size_t nn = grid.num_nodes();
  const double dr = grid.spacing();
  const double eps2 = params.epsilon * params.epsilon;
  std::vector<double> mu = radial_laplacian(u, grid);
  for (std::size_t i = 0; i < nn; ++i) mu[i] = -eps2 * mu[i] + free_energy_terms(u[i]).f_prime;
  std::vector<double> flux(nn - 1);
  for (std::size_t i = 0; i + 1 < nn; ++i) {
    const double m = mobility(0.5 * (u[i] + u[i + 1]), params);
    flux[i] = -grid.half_node(i) * m * (mu[i + 1] - mu[i]) / dr;
  }
  std::vector<double> rhs(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    const double out = i + 1 < nn ? flux[i] : 0.0;
    const double in = i > 0 ? flux[i - 1] : 0.0;
    rhs[i] = -(out - in) / grid.weight(i);
  }
  return rhs;
}

namespace {

/// Backward Euler step in mixed form. Unknowns are interleaved as
/// z = (u_0, mu_0, u_1, mu_1, ...), rows 2i hold
///   u_i - u_old_i + (dt / w_i) (F_{i+1/2} - F_{i-1/2})
/// and rows 2i+1 hold mu_i + eps^2 L_h(u)_i - f'(u_i). Eliminating mu gives
/// the fourth-order system, but the mixed Jacobian (3 sub- and 3
/// super-diagonals) stays well conditioned for very large dt.
class BackwardEulerSystem {
 public:
  BackwardEulerSystem(const RadialGrid& grid, const ModelParams& params)
      : grid_(grid), params_(params), nn_(grid.num_nodes()), flux_(nn_ - 1), dflux_(nn_ - 1) {}

  static constexpr std::size_t kBand = 3;

  void evaluate(std::span<const double> z, std::span<const double> u_old, double dt,
                std::span<double> residual, BandedMatrix* jacobian) {
    const double dr = grid_.spacing();
    const double eps2 = params_.epsilon * params_.epsilon;
    auto u = [&](std::size_t i) { return z[2 * i]; };
    auto mu = [&](std::size_t i) { return z[2 * i + 1]; };
    if (jacobian) jacobian->set_zero();

    for (std::size_t i = 0; i + 1 < nn_; ++i) {
      const double g = -grid_.half_node(i) / dr;
      const double mid = 0.5 * (u(i) + u(i + 1));
      const double m = mobility(mid, params_);
      const double dmu = mu(i + 1) - mu(i);
      flux_[i] = g * m * dmu;
      if (jacobian) dflux_[i] = {0.5 * g * mobility_derivative(mid, params_) * dmu, g * m};
    }

    for (std::size_t i = 0; i < nn_; ++i) {
      const double scale = dt / grid_.weight(i);
      const double out = i + 1 < nn_ ? flux_[i] : 0.0;
      const double in = i > 0 ? flux_[i - 1] : 0.0;
      residual[2 * i] = u(i) - u_old[i] + scale * (out - in);

      const double inv = 1.0 / (dr * grid_.weight(i));
      const double right = i + 1 < nn_ ? grid_.half_node(i) * inv : 0.0;
      const double left = i > 0 ? grid_.half_node(i - 1) * inv : 0.0;
      double lap = 0.0;
      if (i + 1 < nn_) lap += right * (u(i + 1) - u(i));
      if (i > 0) lap -= left * (u(i) - u(i - 1));
      residual[2 * i + 1] = mu(i) + eps2 * lap - free_energy_terms(u(i)).f_prime;

      if (!jacobian) continue;
      BandedMatrix& j = *jacobian;
      const std::size_t ru = 2 * i;
      const std::size_t rm = 2 * i + 1;
      j(ru, ru) += 1.0;
      if (i + 1 < nn_) {
        // + scale * F_{i+1/2}(u_i, u_{i+1}, mu_i, mu_{i+1})
        j(ru, 2 * i) += scale * dflux_[i][0];
        j(ru, 2 * i + 2) += scale * dflux_[i][0];
        j(ru, 2 * i + 1) -= scale * dflux_[i][1];
        j(ru, 2 * i + 3) += scale * dflux_[i][1];
      }
      if (i > 0) {
        // - scale * F_{i-1/2}(u_{i-1}, u_i, mu_{i-1}, mu_i)
        j(ru, 2 * i - 2) -= scale * dflux_[i - 1][0];
        j(ru, 2 * i) -= scale * dflux_[i - 1][0];
        j(ru, 2 * i - 1) += scale * dflux_[i - 1][1];
        j(ru, 2 * i + 1) -= scale * dflux_[i - 1][1];
      }
      j(rm, rm) += 1.0;
      j(rm, ru) += -eps2 * (left + right) - free_energy_second_derivative(u(i));
      if (i + 1 < nn_) j(rm, 2 * i + 2) += eps2 * right;
      if (i > 0) j(rm, 2 * i - 2) += eps2 * left;
    }
  }

 private:
  const RadialGrid& grid_;
  const ModelParams& params_;
  std::size_t nn_;
  std::vector<double> flux_;
  // dF/du at either end node, and g M so that dF/dmu_{i+1} = -dF/dmu_i = g M.
  std::vector<std::array<double, 2>> dflux_;
};

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

ImplicitStepResult implicit_euler_step(const RadialState& state, double dt, const ModelParams& params,
                                       const RadialGrid& grid, const SolverConfig& config) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  const std::size_t nn = grid.num_nodes();
  if (state.values.size() != nn) throw DomainError("state does not match grid");

  BackwardEulerSystem system(grid, params);
  BandedMatrix jac(2 * nn, BackwardEulerSystem::kBand, BackwardEulerSystem::kBand);
  std::vector<double> z(2 * nn);
  const std::vector<double> mu0 = chemical_potential(state, params, grid);
  for (std::size_t i = 0; i < nn; ++i) {
    z[2 * i] = state.values[i];
    z[2 * i + 1] = mu0[i];
  }
  std::vector<double> residual(2 * nn);

  for (int iter = 1; iter <= config.newton_max_iter; ++iter) {
    try {
      system.evaluate(z, state.values, dt, residual, &jac);
    } catch (const DomainError& e) {
      throw NewtonDivergence(std::string("Newton iterate left the mobility domain: ") + e.what());
    }
    for (double& r : residual) r = -r;
    try {
      jac.solve_in_place(residual);
    } catch (const NoConvergence& e) {
      throw NewtonDivergence(e.what());
    }
    // Damping and convergence are judged on the u components.
    double size = 0.0;
    for (std::size_t i = 0; i < nn; ++i) size = std::max(size, std::abs(residual[2 * i]));
    if (!std::isfinite(size) || !std::isfinite(max_abs(residual)))
      throw NewtonDivergence("Newton correction is not finite");
    const double damping = size > config.newton_max_update ? config.newton_max_update / size : 1.0;
    for (std::size_t k = 0; k < z.size(); ++k) z[k] += damping * residual[k];
    if (damping == 1.0 && size < config.newton_tol) {
      std::vector<double> u(nn);
      for (std::size_t i = 0; i < nn; ++i) u[i] = z[2 * i];
      return {RadialState{state.time + dt, std::move(u)}, iter};
    }
  }
  throw NewtonDivergence("Newton did not converge in " + std::to_string(config.newton_max_iter) +
                         " iterations (dt = " + std::to_string(dt) + ")");
}

std::optional<TouchdownEvent> detect_touchdown(const RadialState& state, const RadialGrid& grid,
                                               double touchdown_tol) {
  const auto& u = state.values;
  const std::size_t nn = u.size();
  for (std::size_t k = 0; k < nn; ++k) {
    const double v = 1.0 - u[k];
    if (!(u[k] > 1.0) && !(v <= touchdown_tol)) continue;
    const TouchdownKind kind = u[k] > 1.0 ? TouchdownKind::crossed_one : TouchdownKind::reached_threshold;
    // The event node sits on the flank of the maximum of u; walk up to it.
    std::size_t top = k;
    while (top + 1 < nn && u[top + 1] >= u[top]) ++top;
    double radius = grid.node(top);
    if (top > 0 && top + 1 < nn) {
      const double a = u[top - 1];
      const double b = u[top];
      const double c = u[top + 1];
      const double curv = a - 2.0 * b + c;
      if (curv < 0.0) {
        const double offset = 0.5 * (a - c) / curv;
        radius += std::clamp(offset, -1.0, 1.0) * grid.spacing();
      }
    }
    return TouchdownEvent{state.time, std::clamp(radius, 0.0, 1.0), kind};
  }
  return std::nullopt;
}

std::vector<double> log_spaced_times(double t_first, double t_last, int per_decade) {
  std::vector<double> times;
  if (!(t_first > 0.0) || t_last < t_first) return times;
  const double l0 = std::log10(t_first);
  const double l1 = std::log10(t_last);
  const auto count = static_cast<long>(std::floor((l1 - l0) * per_decade + 1e-9));
  for (long k = 0; k <= count; ++k)
    times.push_back(std::pow(10.0, l0 + static_cast<double>(k) / per_decade));
  return times;
}

AdvanceResult adaptive_advance(RadialState state, double t_end, const ModelParams& params,
                               const RadialGrid& grid, const SolverConfig& config,
                               DiagnosticsSeries& sink, const AdvanceHooks& hooks) {
  config.validate();
  params.validate();
  if (!(t_end > state.time)) throw DomainError("t_end must exceed the current time");

  // Merged, sorted schedule of diagnostics and snapshot times after state.time.
  struct Target {
    double t;
    bool diagnostics;
    bool snapshot;
  };
  std::vector<Target> targets;
  for (double t : log_spaced_times(config.first_output_time, t_end, config.outputs_per_decade))
    if (t > state.time) targets.push_back({t, true, false});
  for (double t : hooks.snapshot_times)
    if (t > state.time && t <= t_end) targets.push_back({t, false, true});
  targets.push_back({t_end, true, false});
  std::sort(targets.begin(), targets.end(), [](const Target& a, const Target& b) { return a.t < b.t; });
  std::vector<Target> merged;
  for (const auto& tg : targets) {
    if (!merged.empty() && std::abs(tg.t - merged.back().t) <= 1e-12 * tg.t) {
      merged.back().diagnostics |= tg.diagnostics;
      merged.back().snapshot |= tg.snapshot;
    } else {
      merged.push_back(tg);
    }
  }

  if (sink.empty() || sink.back().t < state.time) sink.append(diagnose(state, params, grid));

  AdvanceResult result;
  double dt = config.dt_init;
  std::size_t next = 0;
  double prev_max_u = *std::max_element(state.values.begin(), state.values.end());

  while (next < merged.size()) {
    if (result.accepted_steps >= config.max_steps) throw StepSizeUnderflow("step budget exhausted");
    if (dt < config.dt_min)
      throw StepSizeUnderflow("time step " + std::to_string(dt) + " fell below dt_min at t = " +
                              std::to_string(state.time));
    const double target = merged[next].t;
    const bool hits_target = state.time + dt >= target * (1.0 - 1e-13);
    const double h = hits_target ? target - state.time : dt;

    StepOutcome outcome;
    try {
      auto big = implicit_euler_step(state, h, params, grid, config);
      auto half = implicit_euler_step(state, 0.5 * h, params, grid, config);
      auto small = implicit_euler_step(half.state, 0.5 * h, params, grid, config);
      double err = 0.0;
      double scale = 0.0;
      for (std::size_t i = 0; i < state.values.size(); ++i) {
        err = std::max(err, std::abs(small.state.values[i] - big.state.values[i]));
        scale = std::max(scale, std::abs(small.state.values[i]));
      }
      err /= std::max(scale, std::numeric_limits<double>::min());
      if (!(err <= config.time_tol)) {
        ++result.rejected_steps;
        dt = h * std::max(0.2, 0.9 * std::sqrt(config.time_tol / err));
        continue;
      }
      const double factor =
          err > 0.0 ? std::min(config.dt_max_growth, 0.9 * std::sqrt(config.time_tol / err))
                    : config.dt_max_growth;
      outcome.state = std::move(small.state);
      outcome.dt_used = h;
      outcome.dt_next = h * std::max(factor, 0.2);
      if (hits_target) outcome.dt_next = std::max(outcome.dt_next, dt);
      outcome.newton_iters = big.newton_iters + half.newton_iters + small.newton_iters;
      outcome.error_estimate = err;
    } catch (const NewtonDivergence&) {
      ++result.rejected_steps;
      dt = 0.5 * h;
      continue;
    }

    outcome.state.time = hits_target ? target : state.time + h;
    const double old_time = state.time;
    state = std::move(outcome.state);
    outcome.state = state;
    ++result.accepted_steps;
    dt = outcome.dt_next;
    if (hooks.on_step) hooks.on_step(outcome);

    if (auto event = detect_touchdown(state, grid, config.touchdown_tol)) {
      const double max_u = *std::max_element(state.values.begin(), state.values.end());
      if (event->kind == TouchdownKind::crossed_one && max_u > prev_max_u) {
        // Linear interpolation of max u in time for the crossing instant.
        const double frac = (1.0 - prev_max_u) / (max_u - prev_max_u);
        event->time = old_time + std::clamp(frac, 0.0, 1.0) * (state.time - old_time);
      }
      sink.append(diagnose(state, params, grid));
      result.touchdown = event;
      break;
    }
    prev_max_u = *std::max_element(state.values.begin(), state.values.end());

    if (hits_target) {
      if (merged[next].diagnostics) sink.append(diagnose(state, params, grid));
      if (merged[next].snapshot && hooks.on_snapshot) hooks.on_snapshot(state);
      ++next;
    }
  }

  result.state = std::move(state);
  result.dt_next = dt;
  return result;
}

}  // namespace dch
