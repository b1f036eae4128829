#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "run_config.hpp"

namespace pwinterp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitToleranceFailure = 3;

struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  std::string relation;  // "<=", ">=" or "=="
  bool passed = false;
};

struct RunOutcome {
  nlohmann::json report;
  std::vector<Check> checks;
  bool passed() const;
};

/// Runs config.command, writes report.json, tables/*.csv and plots/*.svg under
/// config.out, and returns the report. The config must have passed validate().
RunOutcome execute(const RunConfig& config);

/// Report without the wall-time field, serialized; equal across reruns.
std::string stable_report_text(const nlohmann::json& report);

}  // namespace pwinterp::cli
