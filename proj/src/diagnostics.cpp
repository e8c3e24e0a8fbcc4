#include "dch/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "dch/errors.hpp"
#include "dch/solver.hpp"

namespace dch {

void DiagnosticsSeries::append(const DiagnosticsRow& row) {
  if (!rows_.empty() && !(row.t > rows_.back().t))
    throw DomainError("diagnostics times must be strictly increasing");
  rows_.push_back(row);
}

double mass(const RadialState& state, const RadialGrid& grid) {
  double m = 0.0;
  for (std::size_t i = 0; i < grid.num_nodes(); ++i) m += grid.weight(i) * state.values[i];
  return m;
}

double energy(const RadialState& state, const ModelParams& params, const RadialGrid& grid) {
  const auto& u = state.values;
  const double dr = grid.spacing();
  const double eps2 = params.epsilon * params.epsilon;
  double bulk = 0.0;
  for (std::size_t i = 0; i < grid.num_nodes(); ++i) bulk += grid.weight(i) * free_energy_terms(u[i]).f;
  double gradient = 0.0;
  for (std::size_t i = 0; i + 1 < grid.num_nodes(); ++i) {
    const double du = u[i + 1] - u[i];
    gradient += grid.half_node(i) * du * du;
  }
  return bulk + 0.5 * eps2 * gradient / dr;
}

double dissipation(const RadialState& state, const ModelParams& params, const RadialGrid& grid) {
  const auto& u = state.values;
  const std::vector<double> mu = chemical_potential(state, params, grid);
  const double dr = grid.spacing();
  double d = 0.0;
  for (std::size_t i = 0; i + 1 < grid.num_nodes(); ++i) {
    const double grad = (mu[i + 1] - mu[i]) / dr;
    d += grid.half_node(i) * mobility(0.5 * (u[i] + u[i + 1]), params) * grad * grad;
  }
  return -d * dr;
}

Extrema track_extrema(std::span<const double> v, const RadialGrid& grid) {
  const std::size_t nn = v.size();
  std::size_t best = 0;
  for (std::size_t k = 1; k + 1 < nn; ++k) {
    if (v[k] <= v[k - 1] && v[k] <= v[k + 1] && (best == 0 || v[k] < v[best])) best = k;
  }
  if (best == 0) throw NoInteriorMinimum("v has no interior local minimum");
  const double dr = grid.spacing();
  const double a = v[best - 1];
  const double b = v[best];
  const double c = v[best + 1];
  const double second = (a - 2.0 * b + c) / (dr * dr);
  const double first = (c - a) / (2.0 * dr);
  double offset = 0.0;
  double vmin = b;
  if (second > 0.0) {
    offset = -first / second;
    vmin = b - 0.5 * first * first / second;
  }
  return {v[0], grid.node(best) + offset, vmin, second};
}

Extrema track_extrema(const RadialState& state, const RadialGrid& grid) {
  return track_extrema(state.distance_from_upper(), grid);
}

DiagnosticsRow diagnose(const RadialState& state, const ModelParams& params, const RadialGrid& grid) {
  DiagnosticsRow row{};
  row.t = state.time;
  row.mass = mass(state, grid);
  row.energy = energy(state, params, grid);
  row.dissipation = dissipation(state, params, grid);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  row.v0 = 1.0 - state.values.front();
  row.rbar = row.vmin = row.d2v = nan;
  try {
    const Extrema ex = track_extrema(state, grid);
    row.rbar = ex.rbar;
    row.vmin = ex.vmin;
    row.d2v = ex.d2v;
  } catch (const NoInteriorMinimum&) {
  }
  return row;
}

}  // namespace dch
