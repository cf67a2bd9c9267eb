#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "neseek/sim.hpp"

namespace neseek {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitCondition = 3;
inline constexpr int kExitDivergence = 4;

struct RunReport {
  std::string scenario;
  std::string mode;
  std::vector<ConditionReport> conditions;
  Vector nash;
  std::optional<double> settling_time;
  double settle_tolerance = 0.0;
  double final_ne_dist = 0.0;
  double final_rho_norm = 0.0;
  double final_eta_err = 0.0;
  std::string trajectory_path;
  std::string report_path;
};

std::string to_json(const RunReport& report);

// Overrides applied on top of a loaded scenario.
struct RunOptions {
  std::optional<Mode> mode;
  std::optional<double> delta;
  std::optional<double> step;
  std::optional<double> horizon;
  std::string out_dir = ".";
  bool force = false;
  double settle_tolerance = 1e-3;
};

// A bundled scenario name ("example1", "example2") unless a file of that name exists.
ScenarioConfig resolve_scenario(const std::string& name_or_path);

// Runs one scenario, writes <name>_trajectory.csv and <name>_report.json into
// options.out_dir and returns the report. Throws the library errors unchanged.
RunReport run_scenario(ScenarioConfig cfg, const RunOptions& options);

// Entry point behind the neseek executable; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace neseek
