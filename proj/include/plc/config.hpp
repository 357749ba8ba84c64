#pragma once

#include <string>

#include <json.hpp>

#include "plc/coupling.hpp"
#include "plc/diagnostics.hpp"
#include "plc/model.hpp"

namespace plc::cfg {

struct GridSpec {
  int K = 1024;          ///< characteristic cells across the strip
  double h_char = 0.0;   ///< if > 0, overrides K with the nearest even Xtil / h_char
  int nx = 64;           ///< physical cells in x
  int nt = 0;            ///< physical time steps; 0 picks dt close to dx / 8
  int fd_n = 0;          ///< oracle cells; 0 means 4 nx
  double dt_fd = 0.0;    ///< oracle step; 0 picks a stable step
  int sweeps = 2;
  int gauss = 8;
};

/// Bounds for the pass/fail table. Constants of the O(h) checks multiply dx.
struct CheckSpec {
  double reconcile_C = 1.0;
  double weak_C = 1.0;
  double boundary_C = 1.0;
  int weak_m = 3;
  double oracle_tol = 5e-3;
  double modal_tol = 5e-3;
  double pq_floor = 0.0;  ///< min(p, q) must exceed this
};

struct RunConfig {
  std::string label = "run";
  coupling::Mode mode = coupling::Mode::Coupled;
  double T = 0.5;
  ProblemSpec problem;
  std::string preset;  ///< name of the data preset, empty for explicit data
  GridSpec grids;
  coupling::FixedPointConfig fixed_point;
  diag::Slack slack;
  CheckSpec checks;
  std::string out_dir = "out";
  std::string check_level = "fast";
  nlohmann::json sweep;   ///< dotted path -> array of values, for the sweep command
  nlohmann::json source;  ///< the parsed document, used as the sweep template
};

/// Throws Error(ConfigError) with the offending key on malformed input.
/// Coefficient errors surface as InvalidCoefficients.
RunConfig parse(const nlohmann::json& j);
RunConfig load(const std::string& path);
/// The built-in configuration used when no file is given.
RunConfig default_config();

/// Normalized echo of a configuration (explicit samplers, all defaults filled).
nlohmann::json to_json(const RunConfig& c);

const char* mode_name(coupling::Mode m);
coupling::Mode parse_mode(const std::string& s);

Sampler parse_sampler(const nlohmann::json& j, const std::string& where);
nlohmann::json sampler_json(const Sampler& s);

/// Sets a dotted path ("boundary.iota") in a JSON object, creating objects as needed.
void set_path(nlohmann::json& j, const std::string& path, const nlohmann::json& value);

}  // namespace plc::cfg
