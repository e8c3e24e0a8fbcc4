#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dch/model.hpp"
#include "dch/solver.hpp"

namespace dch {

inline constexpr const char* kVersion = "0.1.0";

struct AnnularConfig {
  std::size_t intervals = 4000;
  double tol = 1e-10;
};

struct TouchdownConfig {
  /// 0 selects the automatic truncation and mesh.
  double L = 0.0;
  double L_plus = 200.0;
  std::size_t intervals = 0;
  double tol = 1e-10;
};

struct SimilarityConfig {
  std::size_t window = 8;
  double tail_fraction = 0.2;
  double variance_threshold = 1e-3;
};

struct RunConfig {
  ModelParams model;
  InitialProfileOptions initial;
  std::size_t grid_N = 4000;
  SolverConfig solver;
  double t_end = 1e12;
  std::string out_dir = "out";
  int snapshots_per_decade = 8;
  double first_snapshot_time = 1.0;
  /// Snapshot times compared against the composite approximation.
  std::vector<double> compare_times = {1e13, 1e15};
  AnnularConfig annular;
  TouchdownConfig touchdown;
  SimilarityConfig similarity;
  std::vector<std::string> stages = {"simulate", "exponents", "annular", "touchdown", "composite"};

  void validate() const;
};

nlohmann::json to_json(const RunConfig& config);
/// Throws ConfigError naming the offending field.
RunConfig config_from_json(const nlohmann::json& j);
/// Reads a JSON configuration file. Throws ConfigError with line and column on
/// syntax errors and with the field path on type errors.
RunConfig load_config(const std::string& path);

/// FNV-1a hash of the canonical JSON dump, as 16 hex digits. The output
/// directory is left out so relocated reruns carry the same hash.
std::string config_hash(const RunConfig& config);

}  // namespace dch
