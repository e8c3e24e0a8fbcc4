// Command-line driver: each pipeline stage as a subcommand.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dch/annular.hpp"
#include "dch/composite.hpp"
#include "dch/config.hpp"
#include "dch/diagnostics.hpp"
#include "dch/errors.hpp"
#include "dch/io.hpp"
#include "dch/similarity.hpp"
#include "dch/solver.hpp"
#include "dch/touchdown.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kSolverFailure = 2, kTouchdown = 3, kValidation = 4 };

struct Overrides {
  std::string config_path;
  std::optional<double> n;
  std::optional<double> eps;
  std::optional<std::size_t> grid_N;
  std::optional<double> t_end;
  std::optional<std::string> out;
  std::vector<std::string> stages;
};

class TouchdownReached : public dch::Error {
 public:
  using dch::Error::Error;
};

dch::RunConfig resolve(const Overrides& o) {
  dch::RunConfig c = o.config_path.empty() ? dch::RunConfig{} : dch::load_config(o.config_path);
  if (o.n) c.model.n = *o.n;
  if (o.eps) c.model.epsilon = *o.eps;
  if (o.grid_N) c.grid_N = *o.grid_N;
  if (o.t_end) c.t_end = *o.t_end;
  if (o.out) c.out_dir = *o.out;
  if (!o.stages.empty()) c.stages = o.stages;
  c.validate();
  return c;
}

std::string path_in(const dch::RunConfig& c, const std::string& name) { return (fs::path(c.out_dir) / name).string(); }

double initial_mass(const dch::RunConfig& c) {
  const dch::RadialGrid grid(c.grid_N);
  return dch::mass(dch::initial_profile(grid, c.model.epsilon, c.initial), grid);
}

std::vector<double> snapshot_schedule(const dch::RunConfig& c) {
  std::vector<double> times;
  if (c.first_snapshot_time < c.t_end)
    times = dch::log_spaced_times(c.first_snapshot_time, c.t_end, c.snapshots_per_decade);
  for (double t : c.compare_times)
    if (t <= c.t_end) times.push_back(t);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(), [](double a, double b) { return std::abs(a - b) <= 1e-12 * b; }),
              times.end());
  return times;
}

json stage_simulate(const dch::RunConfig& c, const std::string& hash) {
  const dch::RadialGrid grid(c.grid_N);
  dch::RadialState state = dch::initial_profile(grid, c.model.epsilon, c.initial);
  dch::DiagnosticsSeries series;
  json manifest = json::array();
  dch::AdvanceHooks hooks;
  hooks.snapshot_times = snapshot_schedule(c);
  int index = 0;
  hooks.on_snapshot = [&](const dch::RadialState& s) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%04d.csv", index++);
    dch::write_csv(path_in(c, name), dch::snapshot_table(s, c.model, grid), hash);
    manifest.push_back({{"time", s.time}, {"path", name}});
  };
  const dch::AdvanceResult result =
      dch::adaptive_advance(std::move(state), c.t_end, c.model, grid, c.solver, series, hooks);
  dch::write_csv(path_in(c, "diagnostics.csv"), dch::diagnostics_table(series), hash);
  json report = {{"accepted_steps", result.accepted_steps},
                 {"rejected_steps", result.rejected_steps},
                 {"final_time", result.state.time},
                 {"snapshots", manifest}};
  if (result.touchdown) {
    report["touchdown"] = {{"time", result.touchdown->time},
                           {"radius", result.touchdown->radius},
                           {"kind", result.touchdown->kind == dch::TouchdownKind::crossed_one ? "crossed_one"
                                                                                             : "reached_threshold"}};
  }
  dch::write_json(path_in(c, "manifest.json"), report, hash);
  if (result.touchdown) throw TouchdownReached("touchdown at t = " + dch::format_number(result.touchdown->time));
  return report;
}

json stage_exponents(const dch::RunConfig& c, const std::string& hash) {
  const dch::DiagnosticsSeries series = dch::diagnostics_from_table(dch::read_csv(path_in(c, "diagnostics.csv")));
  dch::ExponentOptions opt;
  opt.window = c.similarity.window;
  opt.tail_fraction = c.similarity.tail_fraction;
  opt.variance_threshold = c.similarity.variance_threshold;
  const dch::ExponentEstimate e = dch::estimate_exponents(series, opt);
  dch::write_csv(path_in(c, "exponents.csv"), dch::exponents_table(e), hash);
  json j = {{"alpha_hat", e.alpha_hat}, {"beta_hat", e.beta_hat}, {"gamma_hat", e.gamma_hat}, {"min_sigma", e.min_sigma}};
  dch::write_json(path_in(c, "exponents.json"), j, hash);
  return j;
}

dch::AnnularSolution solve_annular_for(const dch::RunConfig& c) {
  dch::AnnularOptions opt;
  opt.intervals = c.annular.intervals;
  return dch::solve_annular(c.model.epsilon, initial_mass(c), c.annular.tol, opt);
}

dch::TouchdownProfile solve_touchdown_for(const dch::RunConfig& c) {
  dch::TouchdownOptions opt;
  opt.L = c.touchdown.L;
  opt.L_plus = c.touchdown.L_plus;
  opt.intervals = c.touchdown.intervals;
  return dch::solve_phi0(c.model.n, c.touchdown.tol, opt);
}

json stage_annular(const dch::RunConfig& c, const std::string& hash) {
  const dch::AnnularSolution a = solve_annular_for(c);
  dch::write_csv(path_in(c, "annular.csv"), dch::annular_table(a), hash);
  json j = {{"r_star", a.r_star}, {"mu0", a.mu0}, {"b2", dch::taylor_coefficient_b2(a, c.model.epsilon)}, {"m0", a.m0}};
  dch::write_json(path_in(c, "annular.json"), j, hash);
  return j;
}

json stage_touchdown(const dch::RunConfig& c, const std::string& hash) {
  const dch::TouchdownProfile p = solve_touchdown_for(c);
  dch::write_csv(path_in(c, "touchdown.csv"), dch::touchdown_table(p), hash);
  json j = {{"n", p.n},          {"L", p.truncation},        {"kappa", p.kappa},
            {"y_min", p.y_min},  {"kappa_min", p.kappa_min}, {"residual", p.node_residual()}};
  dch::write_json(path_in(c, "touchdown.json"), j, hash);
  return j;
}

struct SnapshotRef {
  double time;
  std::string path;
};

std::vector<SnapshotRef> manifest_snapshots(const dch::RunConfig& c) {
  std::vector<SnapshotRef> out;
  std::ifstream in(path_in(c, "manifest.json"));
  if (!in) return out;
  const json m = json::parse(in);
  for (const auto& s : m.at("snapshots")) out.push_back({s.at("time").get<double>(), s.at("path").get<std::string>()});
  return out;
}

json composite_errors(const dch::RunConfig& c, const dch::CompositeModel& model,
                      const std::vector<SnapshotRef>& snaps) {
  const dch::RadialGrid grid(c.grid_N);
  json errors = json::array();
  std::vector<double> values;
  for (const auto& s : snaps) {
    const dch::RadialState state = dch::state_from_table(dch::read_csv(s.path), s.time);
    const dch::CompositeError e = dch::compare_error(model, state, grid);
    errors.push_back({{"time", e.time}, {"max_abs_error", e.max_abs_error}, {"location", e.location}});
    values.push_back(e.max_abs_error);
  }
  json ratios = json::array();
  for (std::size_t k = 1; k < values.size(); ++k) ratios.push_back(values[k - 1] / values[k]);
  return {{"errors", errors}, {"ratios", ratios}};
}

json stage_composite(const dch::RunConfig& c, const std::string& hash, const std::string& snapshot,
                     std::optional<double> snapshot_time, bool self_check) {
  const dch::AnnularSolution a = solve_annular_for(c);
  const dch::TouchdownProfile p = solve_touchdown_for(c);
  const dch::CompositeModel model = dch::build_composite(c.model.n, c.model.epsilon, a, p);
  const dch::RadialGrid grid(c.grid_N);

  dch::Table curves{{"r"}, {}};
  for (double t : c.compare_times) curves.columns.push_back("v_comp_t=" + dch::format_number(t));
  for (std::size_t i = 0; i < grid.num_nodes(); ++i) {
    std::vector<double> row{grid.node(i)};
    for (double t : c.compare_times) row.push_back(dch::evaluate_composite(grid.node(i), t, model));
    curves.rows.push_back(std::move(row));
  }
  dch::write_csv(path_in(c, "composite.csv"), curves, hash);

  json j = {{"n", model.n},
            {"epsilon", model.epsilon},
            {"exponents",
             {{"alpha", model.exps.alpha.str()}, {"beta", model.exps.beta.str()}, {"gamma", model.exps.gamma.str()}}},
            {"r_star", model.r_star},
            {"mu0", model.mu0},
            {"kappa", model.kappa},
            {"c2", model.c2},
            {"a1", model.a1},
            {"b2", model.b2},
            {"J", model.J},
            {"scale_c", model.scale_c},
            {"scale_d", model.scale_d},
            {"matching_defect", model.matching_defect()}};

  std::vector<SnapshotRef> snaps;
  if (self_check) {
    // Snapshot built from v_comp itself at the first comparison time.
    const double t = c.compare_times.empty() ? 1e13 : c.compare_times.front();
    dch::RadialState s;
    s.time = t;
    for (std::size_t i = 0; i < grid.num_nodes(); ++i)
      s.values.push_back(1.0 - dch::evaluate_composite(grid.node(i), t, model));
    const std::string name = path_in(c, "self_snapshot.csv");
    dch::write_csv(name, dch::snapshot_table(s, c.model, grid), hash);
    snaps.push_back({t, name});
  } else if (!snapshot.empty()) {
    if (!snapshot_time) throw dch::ConfigError("--snapshot requires --snapshot-time");
    snaps.push_back({*snapshot_time, snapshot});
  } else {
    for (const auto& s : manifest_snapshots(c))
      for (double t : c.compare_times)
        if (std::abs(s.time - t) <= 1e-12 * t) snaps.push_back({s.time, path_in(c, s.path)});
  }
  if (!snaps.empty()) {
    const json e = composite_errors(c, model, snaps);
    j["comparison"] = e;
    dch::write_json(path_in(c, "composite_error.json"), e, hash);
  }
  dch::write_json(path_in(c, "composite.json"), j, hash);
  return j;
}

json run_stages(const dch::RunConfig& c) {
  fs::create_directories(c.out_dir);
  const std::string hash = dch::config_hash(c);
  json summary = json::object();
  for (const auto& stage : c.stages) {
    if (stage == "simulate") {
      summary["simulate"] = stage_simulate(c, hash);
    } else if (stage == "exponents") {
      summary["exponents"] = stage_exponents(c, hash);
    } else if (stage == "annular") {
      summary["annular"] = stage_annular(c, hash);
    } else if (stage == "touchdown") {
      summary["touchdown"] = stage_touchdown(c, hash);
    } else if (stage == "composite") {
      summary["composite"] = stage_composite(c, hash, "", std::nullopt, false);
    } else {
      throw dch::ConfigError("unknown stage " + stage);
    }
  }
  return summary;
}

int report_failure(const std::exception& e, int code) {
  std::cerr << "dch: " << e.what() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial degenerate Cahn-Hilliard simulations and asymptotics"};
  app.require_subcommand(1);
  // Global flags may also follow the subcommand name.
  app.fallthrough();
  Overrides o;
  app.add_option("--config", o.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--n", o.n, "Degeneracy exponent of the mobility");
  app.add_option("--eps", o.eps, "Interface width epsilon");
  app.add_option("--grid-N", o.grid_N, "Number of grid cells");
  app.add_option("--t-end", o.t_end, "Final time");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--stage", o.stages, "Stage to run with the 'run' subcommand (repeatable)");

  auto* simulate = app.add_subcommand("simulate", "Integrate the PDE; write diagnostics and snapshots");
  auto* exps = app.add_subcommand("exponents", "Local exponents sigma, sigma* and plateau estimates");
  auto* annular = app.add_subcommand("annular", "Solve the annular boundary-value problem");
  auto* touchdown = app.add_subcommand("touchdown", "Solve the touchdown connecting orbit");
  auto* composite = app.add_subcommand("composite", "Matching constants, composite curves and errors");
  std::string snapshot;
  std::optional<double> snapshot_time;
  bool self_check = false;
  composite->add_option("--snapshot", snapshot, "Snapshot CSV to compare against")->check(CLI::ExistingFile);
  composite->add_option("--snapshot-time", snapshot_time, "Time of the snapshot");
  composite->add_flag("--self-check", self_check, "Compare against a snapshot generated from v_comp");
  auto* run = app.add_subcommand("run", "Run the configured stages in order");
  auto* reproduce = app.add_subcommand("reproduce", "Full chain for n = 3, 4, 5 with one summary JSON");
  auto* dump = app.add_subcommand("config", "Print the resolved configuration as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const dch::RunConfig c = resolve(o);
    const std::string hash = dch::config_hash(c);
    json result;
    if (dump->parsed()) {
      std::cout << dch::to_json(c).dump(2) << "\n";
      return kOk;
    }
    if (!reproduce->parsed()) fs::create_directories(c.out_dir);
    if (simulate->parsed()) result = stage_simulate(c, hash);
    if (exps->parsed()) result = stage_exponents(c, hash);
    if (annular->parsed()) result = stage_annular(c, hash);
    if (touchdown->parsed()) result = stage_touchdown(c, hash);
    if (composite->parsed()) result = stage_composite(c, hash, snapshot, snapshot_time, self_check);
    if (run->parsed()) result = run_stages(c);
    if (reproduce->parsed()) {
      json summary = json::object();
      int code = kOk;
      for (double n : {3.0, 4.0, 5.0}) {
        dch::RunConfig cn = c;
        cn.model.n = n;
        cn.out_dir = (fs::path(c.out_dir) / ("n" + std::to_string(static_cast<int>(n)))).string();
        try {
          summary[std::to_string(static_cast<int>(n))] = run_stages(cn);
        } catch (const TouchdownReached& e) {
          summary[std::to_string(static_cast<int>(n))] = {{"error", e.what()}};
          code = kTouchdown;
        } catch (const dch::PlateauNotReached& e) {
          summary[std::to_string(static_cast<int>(n))] = {{"error", e.what()}};
          code = kValidation;
        }
      }
      fs::create_directories(c.out_dir);
      dch::write_json(path_in(c, "summary.json"), summary, hash);
      result = summary;
      std::cout << result.dump(2) << "\n";
      return code;
    }
    std::cout << result.dump(2) << "\n";
    return kOk;
  } catch (const TouchdownReached& e) {
    return report_failure(e, kTouchdown);
  } catch (const dch::ConfigError& e) {
    return report_failure(e, kUsage);
  } catch (const dch::PlateauNotReached& e) {
    return report_failure(e, kValidation);
  } catch (const dch::InconsistentMatching& e) {
    return report_failure(e, kValidation);
  } catch (const dch::TrivialBranch& e) {
    return report_failure(e, kValidation);
  } catch (const dch::Error& e) {
    return report_failure(e, kSolverFailure);
  } catch (const std::exception& e) {
    return report_failure(e, kSolverFailure);
  }
}
