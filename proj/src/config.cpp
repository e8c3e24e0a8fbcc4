#include "dch/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dch/errors.hpp"

namespace dch {

using nlohmann::json;

void RunConfig::validate() const {
  model.validate();
  solver.validate();
  if (grid_N < 2) throw ConfigError("grid_N must be at least 2");
  if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (snapshots_per_decade < 1) throw ConfigError("snapshots_per_decade must be positive");
  if (!(first_snapshot_time > 0.0)) throw ConfigError("first_snapshot_time must be positive");
  if (!(initial.center > 0.0 && initial.center < 1.0)) throw ConfigError("initial.center must lie in (0, 1)");
}

json to_json(const RunConfig& c) {
  const SolverConfig& s = c.solver;
  return json{
      {"model", {{"epsilon", c.model.epsilon}, {"n", c.model.n}, {"mobility", std::string(to_string(c.model.mobility_variant))}}},
      {"initial",
       {{"amplitude", c.initial.amplitude}, {"center", c.initial.center}, {"clamp_endpoints", c.initial.clamp_endpoints}}},
      {"grid_N", c.grid_N},
      {"solver",
       {{"newton_tol", s.newton_tol},
        {"newton_max_iter", s.newton_max_iter},
        {"newton_max_update", s.newton_max_update},
        {"time_tol", s.time_tol},
        {"dt_init", s.dt_init},
        {"dt_max_growth", s.dt_max_growth},
        {"dt_min", s.dt_min},
        {"touchdown_tol", s.touchdown_tol},
        {"outputs_per_decade", s.outputs_per_decade},
        {"first_output_time", s.first_output_time},
        {"max_steps", s.max_steps}}},
      {"t_end", c.t_end},
      {"outputs",
       {{"dir", c.out_dir},
        {"snapshots_per_decade", c.snapshots_per_decade},
        {"first_snapshot_time", c.first_snapshot_time},
        {"compare_times", c.compare_times}}},
      {"annular", {{"intervals", c.annular.intervals}, {"tol", c.annular.tol}}},
      {"touchdown",
       {{"L", c.touchdown.L}, {"L_plus", c.touchdown.L_plus}, {"intervals", c.touchdown.intervals}, {"tol", c.touchdown.tol}}},
      {"similarity",
       {{"window", c.similarity.window},
        {"tail_fraction", c.similarity.tail_fraction},
        {"variance_threshold", c.similarity.variance_threshold}}},
      {"stages", c.stages},
  };
}

namespace {

// Reads j[path] into out when present; missing keys keep their defaults.
template <class T>
void read(const json& j, const std::string& prefix, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("field " + prefix + key + ": " + e.what());
  }
}

const json& section(const json& j, const char* key) {
  static const json empty = json::object();
  if (!j.contains(key)) return empty;
  if (!j.at(key).is_object()) throw ConfigError(std::string("field ") + key + ": expected an object");
  return j.at(key);
}

}  // namespace

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration root must be an object");
  RunConfig c;
  const json& m = section(j, "model");
  read(m, "model.", "epsilon", c.model.epsilon);
  read(m, "model.", "n", c.model.n);
  std::string variant(to_string(c.model.mobility_variant));
  read(m, "model.", "mobility", variant);
  try {
    c.model.mobility_variant = parse_mobility_variant(variant);
  } catch (const Error& e) {
    throw ConfigError(std::string("field model.mobility: ") + e.what());
  }
  const json& in = section(j, "initial");
  read(in, "initial.", "amplitude", c.initial.amplitude);
  read(in, "initial.", "center", c.initial.center);
  read(in, "initial.", "clamp_endpoints", c.initial.clamp_endpoints);
  read(j, "", "grid_N", c.grid_N);
  const json& s = section(j, "solver");
  read(s, "solver.", "newton_tol", c.solver.newton_tol);
  read(s, "solver.", "newton_max_iter", c.solver.newton_max_iter);
  read(s, "solver.", "newton_max_update", c.solver.newton_max_update);
  read(s, "solver.", "time_tol", c.solver.time_tol);
  read(s, "solver.", "dt_init", c.solver.dt_init);
  read(s, "solver.", "dt_max_growth", c.solver.dt_max_growth);
  read(s, "solver.", "dt_min", c.solver.dt_min);
  read(s, "solver.", "touchdown_tol", c.solver.touchdown_tol);
  read(s, "solver.", "outputs_per_decade", c.solver.outputs_per_decade);
  read(s, "solver.", "first_output_time", c.solver.first_output_time);
  read(s, "solver.", "max_steps", c.solver.max_steps);
  read(j, "", "t_end", c.t_end);
  const json& o = section(j, "outputs");
  read(o, "outputs.", "dir", c.out_dir);
  read(o, "outputs.", "snapshots_per_decade", c.snapshots_per_decade);
  read(o, "outputs.", "first_snapshot_time", c.first_snapshot_time);
  read(o, "outputs.", "compare_times", c.compare_times);
  const json& a = section(j, "annular");
  read(a, "annular.", "intervals", c.annular.intervals);
  read(a, "annular.", "tol", c.annular.tol);
  const json& t = section(j, "touchdown");
  read(t, "touchdown.", "L", c.touchdown.L);
  read(t, "touchdown.", "L_plus", c.touchdown.L_plus);
  read(t, "touchdown.", "intervals", c.touchdown.intervals);
  read(t, "touchdown.", "tol", c.touchdown.tol);
  const json& sim = section(j, "similarity");
  read(sim, "similarity.", "window", c.similarity.window);
  read(sim, "similarity.", "tail_fraction", c.similarity.tail_fraction);
  read(sim, "similarity.", "variance_threshold", c.similarity.variance_threshold);
  read(j, "", "stages", c.stages);
  try {
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte is 1-based and points one past the offending character.
    std::size_t line = 1, column = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError(path + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const RunConfig& config) {
  json j = to_json(config);
  j["outputs"].erase("dir");
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace dch
