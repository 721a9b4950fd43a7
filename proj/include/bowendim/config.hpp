#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bowendim/common.hpp"

namespace bowendim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// everything a run needs, before the owning system validates it; flags
// override file values, file values override these defaults
struct RunConfig {
  // [run]
  int depth = 10;
  std::uint64_t seed = 42;
  std::string output_dir = "out";
  int sample_size = 200;
  int anchor_count = 3;
  double tolerance = -1.0; // < 0 = pick by system kind: 0.03 for ifs oracles, 0.08 otherwise
  std::string claim = "all";
  double t = 0.0;           // potential multiplier for the pressure command
  double query_epsilon = 0.0; // > 0 switches pressure to the fixed-scale variant
  int root_depth = 10;

  // [system]
  std::string system = "ifs";
  std::vector<double> ratios{1.0 / 3.0, 1.0 / 3.0};
  std::vector<double> offsets{0.0, 2.0 / 3.0};
  std::vector<int> flips;
  int m = 3;
  double contraction = 1.0 / 3.0;
  std::vector<double> tau; // flattened pairs (x1,y1,x2,y2,...); empty = staggered defaults
  double coupling = 0.0;
  double alpha = 0.1;
  double half_width = -1.0; // < 0 = the default alpha^2 / 2
  std::vector<double> s{0.5, 0.5, 0.5, 0.5};

  // [ladder]
  std::vector<double> scales; // empty = geometric default from the system

  // [omega]
  std::string omega_kind = "constant"; // constant | table | samples
  double omega_value = 1.0;
  std::vector<double> omega_table;
  std::string omega_samples;  // file of "location value" lines
  double omega_modulus = 1e-3;
  int minorant_samples = 0; // > 0 builds the minorant from sampled multiplicities

  // [budgets]
  Budgets budgets{};
};

// flat sectioned key = value text: [run] / [system] / [ladder] / [omega] /
// [budgets], '#' comments, lists comma-separated; unknown sections or keys are
// rejected so typos cannot silently fall back to defaults
RunConfig parse_config_file(const std::string& path);

// applies one key to the config; shared by the file parser and tests
void apply_config_entry(RunConfig& cfg, const std::string& section, const std::string& key,
                        const std::string& value);

} // namespace bowendim
