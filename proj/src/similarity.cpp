#include "dch/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "dch/errors.hpp"

namespace dch {

namespace {

double interpolate_linear(const CollapseProfile& c, double x) {
  const auto& xs = c.abscissa;
  if (x <= xs.front()) return c.ordinate.front();
  if (x >= xs.back()) return c.ordinate.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - xs.begin());
  const double s = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
  return (1.0 - s) * c.ordinate[k - 1] + s * c.ordinate[k];
}

std::vector<double> v_of(const RadialState& state) {
  std::vector<double> v(state.values.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 - state.values[i];
  return v;
}

struct TailStats {
  double mean = 0.0;
  double variance = 0.0;
};

TailStats tail_stats(const LogSlopeSeries& series, double s_from) {
  TailStats st;
  std::size_t count = 0;
  for (const auto& p : series.points) {
    if (p.s < s_from) continue;
    st.mean += p.sigma;
    ++count;
  }
  if (count == 0) throw PlateauNotReached("no log-slope samples in the tail");
  st.mean /= static_cast<double>(count);
  for (const auto& p : series.points)
    if (p.s >= s_from) st.variance += (p.sigma - st.mean) * (p.sigma - st.mean);
  st.variance /= static_cast<double>(count);
  return st;
}

}  // namespace

LogSlopeSeries log_slope(std::span<const std::pair<double, double>> series, std::size_t window) {
  const std::size_t width = 2 * window + 1;
  if (series.size() < width) throw DomainError("log_slope needs at least 2 * window + 1 samples");
  std::vector<double> s(series.size());
  std::vector<double> ly(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto [t, y] = series[i];
    if (!(t > 0.0) || !(y > 0.0)) throw NonPositiveData("log_slope requires positive t and y");
    s[i] = std::log(t);
    ly[i] = std::log(y);
    if (i > 0 && !(s[i] > s[i - 1])) throw DomainError("log_slope requires strictly increasing t");
  }
  LogSlopeSeries out;
  out.window = window;
  for (std::size_t i = window; i + window < series.size(); ++i) {
    double ms = 0.0, my = 0.0;
    for (std::size_t k = i - window; k <= i + window; ++k) {
      ms += s[k];
      my += ly[k];
    }
    ms /= static_cast<double>(width);
    my /= static_cast<double>(width);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = i - window; k <= i + window; ++k) {
      sxy += (s[k] - ms) * (ly[k] - my);
      sxx += (s[k] - ms) * (s[k] - ms);
    }
    out.points.push_back({s[i], sxy / sxx});
  }
  return out;
}

std::vector<CollapseProfile> collapse_central(std::span<const RadialState> snapshots, const RadialGrid& grid) {
  std::vector<CollapseProfile> out;
  for (const auto& snap : snapshots) {
    const std::vector<double> v = v_of(snap);
    const Extrema ex = track_extrema(v, grid);
    if (!(v[0] > 0.0)) throw NonPositiveData("central collapse requires v(0, t) > 0");
    CollapseProfile c;
    c.time_label = snap.time;
    for (std::size_t i = 0; i < v.size() && grid.node(i) <= ex.rbar; ++i) {
      c.abscissa.push_back(grid.node(i));
      c.ordinate.push_back(v[i] / v[0]);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<CollapseProfile> collapse_touchdown(std::span<const RadialState> snapshots, const RadialGrid& grid) {
  std::vector<CollapseProfile> out;
  for (const auto& snap : snapshots) {
    const std::vector<double> v = v_of(snap);
    const Extrema ex = track_extrema(v, grid);
    if (!(ex.vmin > 0.0)) throw NonPositiveData("touchdown collapse requires vmin > 0");
    std::vector<double> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = v[i] / ex.vmin;

    // First node right of rbar with w >= 3, then linear interpolation.
    std::size_t k = 0;
    while (k < v.size() && grid.node(k) <= ex.rbar) ++k;
    while (k < v.size() && w[k] < 3.0) ++k;
    if (k >= v.size()) throw NoCrossing("w stays below 3 to the right of the minimum");
    double r3 = grid.node(k);
    if (k > 0 && grid.node(k - 1) > ex.rbar) {
      const double s = (3.0 - w[k - 1]) / (w[k] - w[k - 1]);
      r3 = grid.node(k - 1) + s * grid.spacing();
    } else {
      // Crossing between rbar and the first node: interpolate from (rbar, 1).
      r3 = ex.rbar + (3.0 - 1.0) / (w[k] - 1.0) * (grid.node(k) - ex.rbar);
    }
    const double width = r3 - ex.rbar;

    CollapseProfile c;
    c.time_label = snap.time;
    bool placed_min = false;
    bool placed_three = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double rho = (grid.node(i) - ex.rbar) / width;
      if (!placed_min && rho >= 0.0) {
        c.abscissa.push_back(0.0);
        c.ordinate.push_back(1.0);
        placed_min = true;
      }
      if (!placed_three && rho >= 1.0) {
        c.abscissa.push_back(1.0);
        c.ordinate.push_back(3.0);
        placed_three = true;
      }
      if (rho == 0.0 || rho == 1.0) continue;
      c.abscissa.push_back(rho);
      c.ordinate.push_back(w[i]);
    }
    out.push_back(std::move(c));
  }
  return out;
}

double collapse_spread(std::span<const CollapseProfile> curves, double lo, double hi, std::size_t samples) {
  if (curves.empty()) return 0.0;
  if (samples < 2 || !(hi > lo)) throw DomainError("collapse_spread needs hi > lo and two samples");
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples - 1);
    const double ref = interpolate_linear(curves.front(), x);
    for (std::size_t c = 1; c < curves.size(); ++c)
      worst = std::max(worst, std::abs(interpolate_linear(curves[c], x) - ref) / std::abs(ref));
  }
  return worst;
}

ExponentEstimate estimate_exponents(const DiagnosticsSeries& diag, const ExponentOptions& options) {
  if (!(options.tail_fraction > 0.0 && options.tail_fraction <= 1.0))
    throw DomainError("tail_fraction must lie in (0, 1]");
  // Only rows on the branch with an interior minimum enter either series.
  std::vector<std::pair<double, double>> central;
  std::vector<std::pair<double, double>> minimum;
  for (const auto& row : diag.rows()) {
    if (!(row.t > 0.0) || !std::isfinite(row.vmin)) continue;
    central.emplace_back(row.t, row.v0);
    minimum.emplace_back(row.t, row.vmin);
  }
  ExponentEstimate e;
  e.sigma = log_slope(central, options.window);
  e.sigma_star = log_slope(minimum, options.window);

  const double s_lo = std::log(central.front().first);
  const double s_hi = std::log(central.back().first);
  const double s_from = s_hi - options.tail_fraction * (s_hi - s_lo);
  const TailStats a = tail_stats(e.sigma, s_from);
  const TailStats b = tail_stats(e.sigma_star, s_from);
  if (a.variance > options.variance_threshold || b.variance > options.variance_threshold)
    throw PlateauNotReached("log-slope tail variance exceeds the plateau threshold");
  e.alpha_hat = a.mean;
  e.beta_hat = b.mean;
  e.gamma_hat = 0.5 * e.beta_hat;
  e.min_sigma = e.sigma.points.front().sigma;
  for (const auto& p : e.sigma.points) e.min_sigma = std::min(e.min_sigma, p.sigma);
  return e;
}

}  // namespace dch
