#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bowendim/preimage.hpp"
#include "bowendim/pressure.hpp"

namespace bowendim {

// one measured quantity with uncertainty and provenance
struct QuantityValue {
  double value = 0.0;
  double uncertainty = 0.0;
  std::string method; // regression | partition_sum | spectral | sampled_fraction | threshold
  int depth = 0;
  double epsilon = 0.0; // finest ladder scale for regressions, 0 otherwise
};

void to_json(nlohmann::json& j, const QuantityValue& q);

// outcome of one checked claim: margin = rhs - lhs, verdict pass when the
// margin is no worse than the combined uncertainty, fail below, inconclusive
// only when the measured data does not meet the claim's hypothesis
struct VerificationReport {
  std::string claim; // theorem1 | cor_inj | cor_locconst | prop_max_density | prop_box_constancy
  nlohmann::json inputs;
  QuantityValue lhs;
  QuantityValue rhs;
  double margin = 0.0;
  std::string verdict; // pass | fail | inconclusive
  std::vector<std::string> artifacts; // relative evidence paths, filled on emission
  nlohmann::json details;
};

struct VerifyOptions {
  int depth = 10;
  std::vector<double> ladder; // empty = geometric default from the system's contraction
  int sample_size = 200;
  int anchor_count = 3;             // slope spread checks insist on at least 5
  double tolerance = 0.08;          // geometric comparison margin; 0.03 suits analytic-oracle systems
  double pairwise_tolerance = 0.05; // slope spread allowance across anchors
  std::uint64_t seed = 42;
  std::vector<double> anchors; // explicit base anchors; empty = seeded cylinder anchors
  OmegaSpec omega = OmegaSpec::constant_value(1.0);
  int minorant_samples = 0; // > 0 builds a sampled multiplicity minorant as omega
  double minorant_modulus = 1e-3;
  int root_depth = 10; // partition depth when the root needs sampled omega
  Budgets budgets{};
};

// scales r^2, r^3, ... down to the coarseness floor 4 r^depth, r = sup contraction
std::vector<double> default_ladder(const SkewSystem& sys, int depth);

// measured slice slopes against the Bowen root: every anchor's box slope must
// stay below t_omega up to the stated uncertainties
VerificationReport check_upper_bound(const SkewSystem& sys, const nlohmann::json& system_desc,
                                     const VerifyOptions& opt);

// box slopes agree across anchors: max pairwise difference within the spread
// allowance plus twice the pooled regression error
VerificationReport check_box_constancy(const SkewSystem& sys, const nlohmann::json& system_desc,
                                       const VerifyOptions& opt);

// when the measured slope reaches the omega = 1 root, sampled multiplicities
// should be 1 on at least 95% of the invariant-set sample
VerificationReport check_injectivity_criterion(const SkewSystem& sys, const nlohmann::json& system_desc,
                                               const VerifyOptions& opt);

// per-symbol-constant multiplicities induce a table root t that the measured
// slope must match within the comparison margin
VerificationReport check_locally_constant(const SkewSystem& sys, const nlohmann::json& system_desc,
                                          const VerifyOptions& opt);

// when the slope reaches the root for the minimal multiplicity d, the sample
// should show count d on at least 95% of points, with slopes constant across anchors
VerificationReport check_max_density(const SkewSystem& sys, const nlohmann::json& system_desc,
                                     const VerifyOptions& opt);

} // namespace bowendim
