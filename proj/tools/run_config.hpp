#pragma once

// Experiment configuration read from a JSON document.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace pwinterp::cli {

/// Raised for anything the schema check rejects; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double lemma_residual = 1e-8;
  double kernel_1d = 1e-12;
  double affine = 1e-10;
  double rate_min = 1.7;
  double rate_max = 2.6;
  double bv_exact = 1e-12;
  double bv_min_tv = 3.8;
  double bv_mean_tv = 3.9;
  // Offsets with r above this are not held to the min/mean thresholds.
  double bv_threshold_max_r = 0.02;
  double bv_constant = 1.25;
  double locate = 1e-12;

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct DomainBox {
  std::vector<double> lower;
  std::vector<double> upper;

  friend bool operator==(const DomainBox&, const DomainBox&) = default;
};

struct RunConfig {
  std::string command;
  int n = 2;
  std::string field = "gaussian";
  double p = 2.0;
  double q = 2.0;
  std::vector<double> r;  // empty: the command's default schedule
  std::size_t samples = 32;
  std::uint64_t seed = 1;
  std::optional<DomainBox> domain;
  std::string out = "out";
  // Random simplices and balls per lemma sweep.
  std::size_t simplices = 50;
  std::size_t balls = 20;
  // When set, converge also runs the triangulation search at this error target.
  std::optional<double> search_epsilon;
  Tolerances tolerances;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

const std::vector<std::string>& command_names();

/// Schema-checked parse; unknown keys, wrong types and out-of-range values
/// raise ConfigError.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& config);

/// Range checks that depend on the command (also run after CLI overrides).
void validate(const RunConfig& config);

/// r values used by the command when the config gives none.
std::vector<double> default_schedule(const std::string& command);

}  // namespace pwinterp::cli
