#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "plc/config.hpp"
#include "plc/coupling.hpp"
#include "plc/diagnostics.hpp"
#include "plc/errors.hpp"

namespace plc::pipeline {

/// One row of the pass/fail table. `bound` is an upper bound on `value`
/// unless `lower` is set.
struct Check {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool lower = false;
  bool pass = false;
};

struct RunResult {
  cfg::RunConfig config;
  coupling::SolutionBundle bundle;
  diag::EnergyTrace energy;
  std::vector<Check> checks;
  nlohmann::json summary;

  bool pass() const;
};

/// Closed-form theta for a damped-wave mode: wave-only, c constant, theta0
/// a sum of sin(k x) with k admissible for the walls, theta1 = 0. In coupled
/// runs theta is forced by J, so no closed form is offered there.
struct Reference {
  std::string field;  ///< "theta"
  std::function<double(double, double)> f;
};
std::optional<Reference> closed_form(const ProblemSpec& spec, coupling::Mode mode);

/// Validates, solves and evaluates the checks of config.check_level
/// ("fast" or "full"). Throws plc::Error.
RunResult run(const cfg::RunConfig& config);

/// fields.csv, energy.csv, summary.json and plots/*.svg under dir.
void write_artifacts(const RunResult& r, const std::string& dir);

/// Text table of the checks, one per line.
std::string check_table(const std::vector<Check>& checks);

/// Runs the cross product of config.sweep into dir/run_NNN and writes
/// dir/index.csv. Per-run errors are recorded, not thrown. Returns the
/// number of runs that ended in an error (failed checks are not counted).
int sweep(const cfg::RunConfig& config, const std::string& dir);

/// 2 for configuration and validation errors, 3 for solver failures.
int exit_code(ErrorCode code);

}  // namespace plc::pipeline
