#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dch {

enum class MobilityVariant { plain, truncated, absolute };

std::string_view to_string(MobilityVariant v);
MobilityVariant parse_mobility_variant(std::string_view name);

/// PDE instance: interface width, degeneracy exponent and mobility form.
struct ModelParams {
  double epsilon = 0.1;
  double n = 4.0;
  MobilityVariant mobility_variant = MobilityVariant::plain;

  /// Throws DomainError unless epsilon > 0 and n >= 0 (n = 0 is constant mobility).
  void validate() const;
};

/// Equidistant radial grid r_i = i / N on [0, 1].
///
/// Each node owns a control volume whose weight w_i enters the discrete mass
/// sum(w_i u_i) and the divergence of the radial flux. Interior weights are
/// r_i dr; the end weights are dr^2/8 at the origin (the exact area of
/// [0, dr/2]) and r_{N-1/2} dr / 2 at r = 1, which reproduces the mirror
/// ghost-node closure there.
class RadialGrid {
 public:
  explicit RadialGrid(std::size_t num_cells);

  std::size_t num_cells() const { return num_cells_; }
  std::size_t num_nodes() const { return num_cells_ + 1; }
  double spacing() const { return spacing_; }
  double node(std::size_t i) const { return static_cast<double>(i) * spacing_; }
  /// Radius of the half node r_{i+1/2}.
  double half_node(std::size_t i) const { return (static_cast<double>(i) + 0.5) * spacing_; }
  double weight(std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }
  std::vector<double> nodes() const;

 private:
  std::size_t num_cells_;
  double spacing_;
  std::vector<double> weights_;
};

/// Order parameter u on the grid nodes at time `time`.
struct RadialState {
  double time = 0.0;
  std::vector<double> values;

  /// v = 1 - u, the distance from the upper phase.
  std::vector<double> distance_from_upper() const;
};

struct FreeEnergyTerms {
  double f;
  double f_prime;
};

/// Quartic double well f(u) = (1 - u^2)^2 / 2 and its derivative.
FreeEnergyTerms free_energy_terms(double u);
/// f''(u) = 6u^2 - 2.
double free_energy_second_derivative(double u);

/// M(u) for the configured variant. Throws DomainError when the plain
/// variant with non-integer n is evaluated outside |u| <= 1.
double mobility(double u, const ModelParams& params);
/// dM/du, same domain rules as mobility().
double mobility_derivative(double u, const ModelParams& params);

struct InitialProfileOptions {
  double amplitude = 0.95;
  double center = 0.5;
  /// Replace the first and last node by +1 and -1 exactly.
  bool clamp_endpoints = false;
};

/// u(r, 0) = -amplitude * tanh((r - center) / epsilon).
RadialState initial_profile(const RadialGrid& grid, double epsilon,
                            const InitialProfileOptions& options = {});

/// Closed-form initial datum at one radius, shared by quadrature checks.
double initial_value(double r, double epsilon, double amplitude = 0.95, double center = 0.5);

}  // namespace dch
