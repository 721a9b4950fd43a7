// acceptance gate: ten end-to-end criteria with their stated tolerances and
// wall-clock budgets. each criterion prints one PASS/FAIL line; the exit code
// is the number of failures, so ctest sees any red.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bowendim/config.hpp"
#include "bowendim/preimage.hpp"
#include "bowendim/report.hpp"
#include "bowendim/systems.hpp"
#include "bowendim/verify.hpp"

using namespace bowendim;

namespace {

using clock_type = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

double elapsed(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

SkewSystem full4_halves() { return build_ifs({{0.5, 0.5, 0.5, 0.5}, {0.0, 0.0, 0.5, 0.5}, {}}); }

SkewSystem cantor_thirds() { return build_ifs({{1.0 / 3, 1.0 / 3}, {0.0, 2.0 / 3}, {}}); }

SkewSystem horseshoe_default() {
  HorseshoeParams p;
  p.tau = default_translations(p.m, p.contraction);
  return build_example1(p, 0.0);
}

// pressure of the full 4-shift with psi = -log 4 is identically zero
Outcome c1_pressure_oracle() {
  const auto start = clock_type::now();
  const auto sys = build_ifs({{0.25, 0.25, 0.25, 0.25}, {0.0, 0.25, 0.5, 0.75}, {}});
  const auto psi = PotentialSpec::constant(-std::log(4.0));
  double worst = 0.0;
  for (int n = 2; n <= 10; ++n)
    worst = std::max(worst, std::abs(pressure_partition_sum(sys, psi, n).value));
  const double secs = elapsed(start);
  return {worst <= 1e-10 && secs < 1.0, fmt("max |pressure| %.1e across depths 2..10, budget 1 s", worst), secs};
}

// closed-form roots: doubling omega halves the exponent, and the overlap
// family's transition growth 2 against fiber ratio 1/2 pins the root at 1
Outcome c2_root_oracles() {
  const auto start = clock_type::now();
  const auto full4 = full4_halves();
  struct Case {
    const char* name;
    SkewSystem sys;
    double omega;
    double expect;
  };
  const std::vector<Case> cases{{"full4 omega 1", full4, 1.0, 2.0},
                                {"full4 omega 2", full4, 2.0, 1.0},
                                {"overlap omega 1", build_example2({}), 1.0, 1.0}};
  double worst = 0.0;
  bool under_budget = true;
  for (const auto& c : cases) {
    const auto t0 = clock_type::now();
    const auto root = bowen_root(c.sys, OmegaSpec::constant_value(c.omega));
    under_budget = under_budget && elapsed(t0) < 1.0;
    worst = std::max(worst, std::abs(root.t - c.expect));
  }
  return {worst <= 1e-8 && under_budget, fmt("max root error %.1e over 3 closed forms, 1 s each", worst),
          elapsed(start)};
}

// three independent estimators of the middle-thirds dimension must agree
Outcome c3_dimension_crosscheck() {
  const auto start = clock_type::now();
  const auto sys = cantor_thirds();
  const double sim = similarity_dimension({1.0 / 3, 1.0 / 3});
  const double root = bowen_root(sys, OmegaSpec::constant_value(1.0)).t;
  const auto slice = stable_slice_approx(sys, 0.0, 10);
  const double slope = box_dimension(sys, slice, default_ladder(sys, 10)).slope;
  const double spread =
      std::max({std::abs(sim - root), std::abs(sim - slope), std::abs(root - slope)});
  const double secs = elapsed(start);
  return {spread <= 0.03 && secs < 30.0,
          fmt("similarity %.6f, root %.6f, box slope %.6f, pairwise spread %.1e", sim, root, slope, spread), secs};
}

// planar horseshoe with the tuned translations: slice slope near 1, root
// exactly 1, upper-bound verdict pass
Outcome c4_horseshoe_slice() {
  const auto start = clock_type::now();
  const auto sys = horseshoe_default();
  VerifyOptions opt;
  opt.depth = 9;
  const auto rep = check_upper_bound(sys, {{"kind", "example1"}}, opt);
  const double slope = rep.lhs.value;
  const double t1 = bowen_root(sys, OmegaSpec::constant_value(1.0)).t;
  const double secs = elapsed(start);
  const bool ok = slope >= 0.9 && slope <= 1.08 && std::abs(t1 - 1.0) <= 1e-8 && rep.verdict == "pass" &&
                  secs < 300.0;
  return {ok, fmt("slope %.4f in [0.9, 1.08], root error %.1e, verdict %s", slope, std::abs(t1 - 1.0),
                  rep.verdict.c_str()),
          secs};
}

// overlap family end to end: multiplicities 1 and 2 both occur, the sampled
// minorant drives the root into [1 - 1e-6, t1], and the slice slope respects it
Outcome c5_overlap_pipeline() {
  const auto start = clock_type::now();
  const auto sys = build_example2({});
  const int depth = 12;
  const auto samples = sample_lambda_points(sys, 500, depth, depth, 42);
  int ones = 0, twos = 0, other = 0;
  std::vector<MinorantSample> observed;
  observed.reserve(samples.size());
  for (const auto& s : samples) {
    const auto rep = count_preimages(sys, s.point, s.itinerary, depth);
    (rep.count == 1 ? ones : rep.count == 2 ? twos : other)++;
    observed.push_back({s.point.base, std::max<std::uint32_t>(rep.count, 1) * 1.0});
  }
  const auto minorant = build_omega_minorant(observed, 1e-3);
  const double t_omega = bowen_root(sys, OmegaSpec::from_minorant(minorant)).t;
  const double t1 = bowen_root(sys, OmegaSpec::constant_value(1.0)).t;
  const auto slice = stable_slice_approx(sys, samples[0].point.base, samples[0].itinerary, depth);
  const double slope = box_dimension(sys, slice, default_ladder(sys, depth)).slope;
  const double secs = elapsed(start);
  const bool ok = ones > 0 && twos > 0 && other == 0 && t_omega >= 1.0 - 1e-6 && t_omega <= t1 + 1e-12 &&
                  slope <= t_omega + 0.08 && secs < 600.0;
  return {ok, fmt("counts 1/2 on %d/%d points, t_omega %.10f <= t1 %.10f, slope %.4f", ones, twos, t_omega, t1,
                  slope),
          secs};
}

// pointwise-larger omega never raises the root, and every solved root carries
// a strict sign-change bracket
Outcome c6_root_monotonicity() {
  const auto start = clock_type::now();
  const auto sys = build_example2({});
  SplitRng rng(2024, "acceptance", 6);
  int monotone = 0, certified = 0;
  const int trials = 20;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<double> lo(4), hi(4);
    for (int j = 0; j < 4; ++j) {
      lo[j] = 1.0 + 0.9 * rng.next_unit();
      hi[j] = lo[j] + (1.98 - lo[j]) * rng.next_unit(); // stays below the growth rate 2
    }
    const auto a = bowen_root(sys, OmegaSpec::per_symbol(lo));
    const auto b = bowen_root(sys, OmegaSpec::per_symbol(hi));
    if (a.t >= b.t - 1e-12) ++monotone;
    const bool cert = !a.clamped && !b.clamped && a.pressure_lo >= 0.0 && a.pressure_hi <= 0.0 &&
                      a.pressure_lo > a.pressure_hi && b.pressure_lo >= 0.0 && b.pressure_hi <= 0.0 &&
                      b.pressure_lo > b.pressure_hi;
    if (cert) ++certified;
  }
  return {monotone == trials && certified == trials,
          fmt("%d/%d pairs monotone, %d/%d brackets certify the strict pressure decrease", monotone, trials,
              certified, trials),
          elapsed(start)};
}

// the entropy-plus-integral gap vanishes exactly at the Gibbs weights and is
// visibly positive away from them
Outcome c7_variational_identity() {
  const auto start = clock_type::now();
  const auto full2 = TransitionStructure::full_shift(2);
  const std::vector<double> phi{std::log(2.0), std::log(3.0)};
  const double at_gibbs = std::abs(variational_check(full2, phi, {0.4, 0.6}));
  const double off_gibbs = variational_check(full2, phi, {0.9, 0.1});
  return {at_gibbs <= 1e-10 && off_gibbs > 1e-3,
          fmt("gap %.1e at the Gibbs weights, %.3f at (0.9, 0.1)", at_gibbs, off_gibbs), elapsed(start)};
}

// slice slopes are anchor-independent on the overlap family
Outcome c8_box_constancy() {
  const auto start = clock_type::now();
  VerifyOptions opt;
  opt.depth = 12;
  opt.anchor_count = 5;
  const auto rep = check_box_constancy(build_example2({}), {{"kind", "example2"}}, opt);
  const bool ok = rep.lhs.value <= 0.05 && rep.verdict == "pass";
  return {ok, fmt("max pairwise slope difference %.1e across 5 anchors at depth 12", rep.lhs.value),
          elapsed(start)};
}

// no-overlap systems put exactly one preimage above every sampled point
Outcome c9_injectivity() {
  const auto start = clock_type::now();
  VerifyOptions opt;
  opt.depth = 10;
  const auto ifs = check_injectivity_criterion(cantor_thirds(), {{"kind", "ifs"}}, opt);
  const auto horseshoe = check_injectivity_criterion(horseshoe_default(), {{"kind", "example1"}}, opt);
  const bool ok = ifs.rhs.value == 1.0 && horseshoe.rhs.value >= 0.95;
  return {ok, fmt("single-preimage fraction %.3f on the ifs, %.3f on the horseshoe", ifs.rhs.value,
                  horseshoe.rhs.value),
          elapsed(start)};
}

std::map<std::string, std::string> read_tree(const std::filesystem::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream body;
    body << in.rdbuf();
    files[std::filesystem::relative(entry.path(), root).generic_string()] = body.str();
  }
  return files;
}

// the full verification suite, emitted twice with one seed, must produce
// byte-identical evidence; every report carries the box-for-Hausdorff note
Outcome c10_determinism() {
  const auto start = clock_type::now();
  const auto sys = build_example2({});
  const nlohmann::json desc{{"kind", "example2"}};
  const auto run_all = [&](const std::filesystem::path& dir) {
    VerifyOptions opt;
    std::vector<VerificationReport> reps;
    reps.push_back(check_upper_bound(sys, desc, opt));
    reps.push_back(check_box_constancy(sys, desc, opt));
    reps.push_back(check_injectivity_criterion(sys, desc, opt));
    reps.push_back(check_locally_constant(sys, desc, opt));
    reps.push_back(check_max_density(sys, desc, opt));
    emit_report(reps, dir.string());
    return reps;
  };
  const auto base = std::filesystem::temp_directory_path();
  const auto dir_a = base / "bowendim_acceptance_a";
  const auto dir_b = base / "bowendim_acceptance_b";
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
  const auto reps = run_all(dir_a);
  // the rerun is additionally pinned to one worker: thread count must not
  // change a single byte of evidence
  const char* prev = std::getenv("BOWEN_DIM_THREADS");
  const std::string saved = prev ? prev : "";
  setenv("BOWEN_DIM_THREADS", "1", 1);
  run_all(dir_b);
  if (prev)
    setenv("BOWEN_DIM_THREADS", saved.c_str(), 1);
  else
    unsetenv("BOWEN_DIM_THREADS");
  const auto tree_a = read_tree(dir_a);
  const auto tree_b = read_tree(dir_b);
  bool noted = true;
  for (const auto& rep : reps) {
    const auto it = rep.details.find("dimension_note");
    noted = noted && it != rep.details.end() && it->get<std::string>().find("box dimension") != std::string::npos &&
            it->get<std::string>().find("Hausdorff") != std::string::npos;
  }
  const bool identical = !tree_a.empty() && tree_a == tree_b;
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
  return {identical && noted,
          fmt("%zu evidence files byte-identical across reruns and thread caps, dimension note in all 5 reports",
              tree_a.size()),
          elapsed(start)};
}

} // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const std::vector<Criterion> criteria{
      {"pressure oracle", c1_pressure_oracle},   {"root closed forms", c2_root_oracles},
      {"dimension crosscheck", c3_dimension_crosscheck}, {"horseshoe slice", c4_horseshoe_slice},
      {"overlap pipeline", c5_overlap_pipeline}, {"root monotonicity", c6_root_monotonicity},
      {"variational identity", c7_variational_identity}, {"box constancy", c8_box_constancy},
      {"injectivity", c9_injectivity},           {"determinism", c10_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].run();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what(), 0.0};
    }
    if (!out.pass) ++failures;
    std::printf("criterion %2zu %-22s %s  %s  (%.2f s)\n", i + 1, criteria[i].name,
                out.pass ? "PASS" : "FAIL", out.detail.c_str(), out.seconds);
  }
  std::printf("%d/10 criteria pass\n", 10 - failures);
  return failures;
}
