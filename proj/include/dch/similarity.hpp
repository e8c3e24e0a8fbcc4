#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "dch/diagnostics.hpp"
#include "dch/model.hpp"

namespace dch {

struct LogSlopePoint {
  double s = 0.0;
  double sigma = 0.0;
};

/// Local exponent sigma(s) = d log y / d log t, s = ln t.
struct LogSlopeSeries {
  std::vector<LogSlopePoint> points;
  std::size_t window = 0;
};

/// Slope of the least-squares line through (ln t, ln y) over a sliding window
/// of 2 * window + 1 samples. Throws NonPositiveData for y <= 0 or t <= 0 and
/// DomainError when there are fewer than 2 * window + 1 samples.
LogSlopeSeries log_slope(std::span<const std::pair<double, double>> series, std::size_t window = 8);

struct CollapseProfile {
  std::vector<double> abscissa;
  std::vector<double> ordinate;
  double time_label = 0.0;
};

/// r -> v(r,t) / v(0,t) on [0, rbar] for every snapshot.
std::vector<CollapseProfile> collapse_central(std::span<const RadialState> snapshots, const RadialGrid& grid);

/// rho -> w with w = v / vmin, rho = (r - rbar) / dr(t) and dr(t) the first
/// distance right of rbar where w = 3. The points (0, 1) and (1, 3) are part
/// of each curve. Throws NoCrossing if w stays below 3.
std::vector<CollapseProfile> collapse_touchdown(std::span<const RadialState> snapshots, const RadialGrid& grid);

/// Largest relative deviation of the curves from the first one, sampled at
/// `samples` equispaced abscissae in [lo, hi] by linear interpolation.
double collapse_spread(std::span<const CollapseProfile> curves, double lo, double hi, std::size_t samples = 201);

struct ExponentOptions {
  double tail_fraction = 0.2;
  std::size_t window = 8;
  double variance_threshold = 1e-3;
};

struct ExponentEstimate {
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  double gamma_hat = 0.0;
  /// Smallest sigma over the series (the transient dip).
  double min_sigma = 0.0;
  LogSlopeSeries sigma;
  LogSlopeSeries sigma_star;
};

/// alpha_hat and beta_hat are the means of sigma (from v0) and sigma* (from
/// vmin) over the last tail_fraction of the s-range; gamma_hat = beta_hat / 2.
/// Rows without an interior minimum are skipped for sigma*. Throws
/// PlateauNotReached if either tail variance exceeds the threshold.
ExponentEstimate estimate_exponents(const DiagnosticsSeries& diag, const ExponentOptions& options = {});

}  // namespace dch
