#include "dch/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "dch/config.hpp"
#include "dch/errors.hpp"
#include "dch/solver.hpp"

namespace dch {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(const std::string& path, const Table& table, const std::string& hash) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "# dch " << kVersion << " config=" << hash << "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
    out << "\n";
  }
  if (!out) throw Error("failed writing " + path);
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  Table t;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    if (header) {
      while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
      header = false;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      if (cell == "nan") {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
      } else {
        row.push_back(std::stod(cell));
      }
    }
    if (row.size() != t.columns.size()) throw Error("malformed row in " + path);
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_json(const std::string& path, nlohmann::json j, const std::string& hash) {
  j["version"] = kVersion;
  j["config_hash"] = hash;
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << "\n";
}

Table diagnostics_table(const DiagnosticsSeries& series) {
  Table t{{"t", "mass", "energy", "dissipation", "v0", "rbar", "vmin", "d2v"}, {}};
  for (const auto& r : series.rows())
    t.rows.push_back({r.t, r.mass, r.energy, r.dissipation, r.v0, r.rbar, r.vmin, r.d2v});
  return t;
}

DiagnosticsSeries diagnostics_from_table(const Table& table) {
  if (table.columns.size() != 8) throw Error("diagnostics table needs 8 columns");
  DiagnosticsSeries s;
  for (const auto& r : table.rows) s.append({r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7]});
  return s;
}

Table snapshot_table(const RadialState& state, const ModelParams& params, const RadialGrid& grid) {
  const std::vector<double> mu = chemical_potential(state, params, grid);
  Table t{{"r", "u", "v", "mu"}, {}};
  for (std::size_t i = 0; i < state.values.size(); ++i)
    t.rows.push_back({grid.node(i), state.values[i], 1.0 - state.values[i], mu[i]});
  return t;
}

RadialState state_from_table(const Table& table, double time) {
  RadialState s;
  s.time = time;
  for (const auto& r : table.rows) s.values.push_back(r.at(1));
  return s;
}

Table annular_table(const AnnularSolution& a) {
  Table t{{"r", "U_star", "W", "S"}, {}};
  for (std::size_t i = 0; i < a.r.size(); ++i) t.rows.push_back({a.r[i], a.U_star[i], a.W[i], a.S[i]});
  return t;
}

Table touchdown_table(const TouchdownProfile& p) {
  Table t{{"y", "phi0", "dphi0", "d2phi0"}, {}};
  for (std::size_t i = 0; i < p.mesh.size(); ++i) t.rows.push_back({p.mesh[i], p.phi[i], p.dphi[i], p.d2phi[i]});
  return t;
}

Table exponents_table(const ExponentEstimate& e) {
  Table t{{"s", "sigma", "sigma_star"}, {}};
  const std::size_t n = std::min(e.sigma.points.size(), e.sigma_star.points.size());
  for (std::size_t i = 0; i < n; ++i)
    t.rows.push_back({e.sigma.points[i].s, e.sigma.points[i].sigma, e.sigma_star.points[i].sigma});
  return t;
}

Table collapse_table(const CollapseProfile& p) {
  Table t{{"abscissa", "ordinate"}, {}};
  for (std::size_t i = 0; i < p.abscissa.size(); ++i) t.rows.push_back({p.abscissa[i], p.ordinate[i]});
  return t;
}

}  // namespace dch
