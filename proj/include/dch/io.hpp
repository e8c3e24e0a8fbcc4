#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dch/annular.hpp"
#include "dch/diagnostics.hpp"
#include "dch/model.hpp"
#include "dch/similarity.hpp"
#include "dch/touchdown.hpp"

namespace dch {

/// Number formatted with 17 significant digits.
std::string format_number(double x);

/// Column-oriented table written as CSV after a "# dch <version> config=<hash>" line.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_csv(const std::string& path, const Table& table, const std::string& hash);
/// Reads a file written by write_csv, skipping comment lines.
Table read_csv(const std::string& path);

/// Writes j with "version" and "config_hash" keys added at the top level.
void write_json(const std::string& path, nlohmann::json j, const std::string& hash);

Table diagnostics_table(const DiagnosticsSeries& series);
DiagnosticsSeries diagnostics_from_table(const Table& table);
/// Columns r, u, v, mu.
Table snapshot_table(const RadialState& state, const ModelParams& params, const RadialGrid& grid);
/// Rebuilds a state from the r and u columns; time is supplied separately.
RadialState state_from_table(const Table& table, double time);
Table annular_table(const AnnularSolution& solution);
Table touchdown_table(const TouchdownProfile& profile);
/// Columns s, sigma, sigma_star on the common s points.
Table exponents_table(const ExponentEstimate& estimate);
Table collapse_table(const CollapseProfile& profile);

}  // namespace dch
