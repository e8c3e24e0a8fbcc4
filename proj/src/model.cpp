#include "dch/model.hpp"

#include <cmath>

#include "dch/errors.hpp"

namespace dch {

namespace {

bool is_integer(double n) { return std::floor(n) == n; }

}  // namespace

std::string_view to_string(MobilityVariant v) {
  switch (v) {
    case MobilityVariant::plain:
      return "plain";
    case MobilityVariant::truncated:
      return "truncated";
    case MobilityVariant::absolute:
      return "absolute";
  }
  return "plain";
}

MobilityVariant parse_mobility_variant(std::string_view name) {
  if (name == "plain") return MobilityVariant::plain;
  if (name == "truncated") return MobilityVariant::truncated;
  if (name == "absolute") return MobilityVariant::absolute;
  throw ConfigError("unknown mobility variant '" + std::string(name) + "'");
}

void ModelParams::validate() const {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (!(n >= 0.0)) throw DomainError("degeneracy exponent n must be nonnegative");
}

RadialGrid::RadialGrid(std::size_t num_cells)
    : num_cells_(num_cells), spacing_(1.0 / static_cast<double>(num_cells)) {
  if (num_cells < 2) throw DomainError("radial grid needs at least two cells");
  weights_.resize(num_cells_ + 1);
  weights_[0] = spacing_ * spacing_ / 8.0;
  for (std::size_t i = 1; i < num_cells_; ++i) weights_[i] = node(i) * spacing_;
  weights_[num_cells_] = half_node(num_cells_ - 1) * spacing_ / 2.0;
}

std::vector<double> RadialGrid::nodes() const {
  std::vector<double> r(num_nodes());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = node(i);
  return r;
}

std::vector<double> RadialState::distance_from_upper() const {
  std::vector<double> v(values.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 - values[i];
  return v;
}

FreeEnergyTerms free_energy_terms(double u) {
  const double g = 1.0 - u * u;
  return {0.5 * g * g, -2.0 * u * g};
}

double free_energy_second_derivative(double u) { return 6.0 * u * u - 2.0; }

double mobility(double u, const ModelParams& params) {
  const double n = params.n;
  if (n == 0.0) return 1.0;
  const double g = 1.0 - u * u;
  switch (params.mobility_variant) {
    case MobilityVariant::plain:
      if (g < 0.0 && !is_integer(n))
        throw DomainError("plain mobility is undefined for |u| > 1 with non-integer n");
      return std::pow(g, n);
    case MobilityVariant::truncated:
      return g > 0.0 ? std::pow(g, n) : 0.0;
    case MobilityVariant::absolute:
      return std::pow(std::abs(g), n);
  }
  return 0.0;
}

double mobility_derivative(double u, const ModelParams& params) {
  const double n = params.n;
  if (n == 0.0) return 0.0;
  const double g = 1.0 - u * u;
  const double dg = -2.0 * u;
  if (g == 0.0) return n == 1.0 ? dg : 0.0;
  switch (params.mobility_variant) {
    case MobilityVariant::plain:
      if (g < 0.0 && !is_integer(n))
        throw DomainError("plain mobility is undefined for |u| > 1 with non-integer n");
      return n * std::pow(g, n - 1.0) * dg;
    case MobilityVariant::truncated:
      return g > 0.0 ? n * std::pow(g, n - 1.0) * dg : 0.0;
    case MobilityVariant::absolute:
      return n * std::pow(std::abs(g), n - 1.0) * (g > 0.0 ? dg : -dg);
  }
  return 0.0;
}

double initial_value(double r, double epsilon, double amplitude, double center) {
  return -amplitude * std::tanh((r - center) / epsilon);
}

RadialState initial_profile(const RadialGrid& grid, double epsilon,
                            const InitialProfileOptions& options) {
  if (!(options.center > 0.0 && options.center < 1.0))
    throw DomainError("initial interface center must lie in (0, 1)");
  RadialState state;
  state.time = 0.0;
  state.values.resize(grid.num_nodes());
  for (std::size_t i = 0; i < grid.num_nodes(); ++i)
    state.values[i] = initial_value(grid.node(i), epsilon, options.amplitude, options.center);
  if (options.clamp_endpoints) {
    state.values.front() = 1.0;
    state.values.back() = -1.0;
  }
  return state;
}

}  // namespace dch
