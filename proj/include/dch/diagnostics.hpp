#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dch/model.hpp"

namespace dch {

/// One sample of the monitored functionals. The extremum fields are NaN while
/// v has no interior minimum (before the interface has formed).
struct DiagnosticsRow {
  double t;
  double mass;
  double energy;
  double dissipation;
  double v0;
  double rbar;
  double vmin;
  double d2v;
};

/// Append-only time series of diagnostics; t is strictly increasing.
class DiagnosticsSeries {
 public:
  void append(const DiagnosticsRow& row);
  const std::vector<DiagnosticsRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  const DiagnosticsRow& back() const { return rows_.back(); }

 private:
  std::vector<DiagnosticsRow> rows_;
};

/// Discrete mass sum_i w_i u_i, the quadrature of int_0^1 u r dr that the
/// flux-form scheme conserves exactly.
double mass(const RadialState& state, const RadialGrid& grid);

/// Discrete free energy: node quadrature of f(u) r plus the half-node sum of
/// (eps^2/2) (du/dr)^2 r. Its gradient is exactly w_i mu_i.
double energy(const RadialState& state, const ModelParams& params, const RadialGrid& grid);

/// -int_0^1 M(u) (d mu/dr)^2 r dr on half nodes; the exact semi-discrete dE/dt.
double dissipation(const RadialState& state, const ModelParams& params, const RadialGrid& grid);

struct Extrema {
  double v0;
  double rbar;
  double vmin;
  double d2v;
};

/// Central value of v and the sub-grid location, value and curvature of its
/// interior minimum. Throws NoInteriorMinimum when v has none on (0, 1).
Extrema track_extrema(std::span<const double> v, const RadialGrid& grid);
Extrema track_extrema(const RadialState& state, const RadialGrid& grid);

/// Full diagnostics row for a state; extremum fields NaN if there is no minimum.
DiagnosticsRow diagnose(const RadialState& state, const ModelParams& params, const RadialGrid& grid);

}  // namespace dch
