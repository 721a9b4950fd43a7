#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bowendim/config.hpp"
#include "bowendim/report.hpp"
#include "bowendim/verify.hpp"

namespace bd = bowendim;

namespace {

bd::SkewSystem make_system(const bd::RunConfig& cfg, nlohmann::json& desc) {
  if (cfg.system == "ifs") {
    bd::IfsParams p{cfg.ratios, cfg.offsets, cfg.flips};
    desc = {{"kind", "ifs"}, {"ratios", cfg.ratios}, {"offsets", cfg.offsets}, {"flips", cfg.flips}};
    return bd::build_ifs(p);
  }
  if (cfg.system == "example1") {
    bd::HorseshoeParams p;
    p.m = cfg.m;
    p.contraction = cfg.contraction;
    if (cfg.tau.empty()) {
      p.tau = bd::default_translations(cfg.m, cfg.contraction);
    } else {
      if (cfg.tau.size() != static_cast<std::size_t>(2 * cfg.m))
        throw bd::ConfigError("malformed config: tau needs exactly 2*m values");
      for (int i = 0; i < cfg.m; ++i)
        p.tau.push_back({cfg.tau[2 * i], cfg.tau[2 * i + 1]});
    }
    nlohmann::json tau = nlohmann::json::array();
    for (const auto& t : p.tau) tau.push_back({t[0], t[1]});
    desc = {{"kind", "example1"}, {"m", cfg.m}, {"contraction", cfg.contraction}, {"tau", tau},
            {"coupling", cfg.coupling}};
    return bd::build_example1(p, cfg.coupling);
  }
  if (cfg.system == "example2") {
    bd::Example2Params p;
    p.alpha = cfg.alpha;
    p.half_width = cfg.half_width;
    if (cfg.s.size() != 4) throw bd::ConfigError("malformed config: s needs exactly 4 values");
    for (int i = 0; i < 4; ++i) p.s[static_cast<std::size_t>(i)] = cfg.s[static_cast<std::size_t>(i)];
    desc = {{"kind", "example2"},
            {"alpha", cfg.alpha},
            {"half_width", cfg.half_width < 0 ? cfg.alpha * cfg.alpha / 2.0 : cfg.half_width},
            {"s", cfg.s}};
    return bd::build_example2(p);
  }
  throw bd::ConfigError("malformed config: unknown system '" + cfg.system + "' (ifs | example1 | example2)");
}

bd::OmegaSpec make_omega(const bd::RunConfig& cfg) {
  if (cfg.omega_kind == "constant") return bd::OmegaSpec::constant_value(cfg.omega_value);
  if (cfg.omega_kind == "table") return bd::OmegaSpec::per_symbol(cfg.omega_table);
  if (cfg.omega_kind == "samples") {
    std::ifstream in(cfg.omega_samples);
    if (!in.good()) throw bd::ConfigError("malformed config: cannot open omega samples '" + cfg.omega_samples + "'");
    std::vector<bd::MinorantSample> samples;
    double loc = 0.0, val = 0.0;
    while (in >> loc >> val) samples.push_back({loc, val});
    if (samples.empty())
      throw bd::ConfigError("malformed config: omega samples '" + cfg.omega_samples + "' holds no pairs");
    return bd::OmegaSpec::from_minorant(bd::build_omega_minorant(samples, cfg.omega_modulus));
  }
  throw bd::ConfigError("malformed config: unknown omega kind '" + cfg.omega_kind + "'");
}

// minorant built from sampled multiplicities, the full pipeline entry for roots
bd::OmegaSpec sampled_omega(const bd::SkewSystem& sys, const bd::RunConfig& cfg) {
  const auto samples =
      bd::sample_lambda_points(sys, cfg.minorant_samples, cfg.depth, cfg.depth, cfg.seed, cfg.budgets);
  std::vector<bd::MinorantSample> ms;
  ms.reserve(samples.size());
  for (const auto& smp : samples) {
    const auto rep = bd::count_preimages(sys, smp.point, smp.itinerary, cfg.depth, -1.0, cfg.budgets);
    ms.push_back({smp.point.base, static_cast<double>(std::max<std::uint32_t>(rep.count, 1))});
  }
  return bd::OmegaSpec::from_minorant(bd::build_omega_minorant(ms, cfg.omega_modulus));
}

bd::VerifyOptions make_verify_options(const bd::RunConfig& cfg) {
  bd::VerifyOptions opt;
  opt.depth = cfg.depth;
  opt.ladder = cfg.scales;
  opt.sample_size = cfg.sample_size;
  opt.anchor_count = cfg.anchor_count;
  opt.tolerance = cfg.tolerance >= 0 ? cfg.tolerance : (cfg.system == "ifs" ? 0.03 : 0.08);
  opt.seed = cfg.seed;
  opt.omega = make_omega(cfg);
  opt.minorant_samples = cfg.minorant_samples;
  opt.minorant_modulus = cfg.omega_modulus;
  opt.root_depth = cfg.root_depth;
  opt.budgets = cfg.budgets;
  return opt;
}

int run_pressure(const bd::RunConfig& cfg) {
  nlohmann::json desc;
  const bd::SkewSystem sys = make_system(cfg, desc);
  const bd::OmegaSpec omega = cfg.minorant_samples > 0 ? sampled_omega(sys, cfg) : make_omega(cfg);
  const bd::PotentialSpec psi = bd::bowen_potential(sys, omega, cfg.t);
  const bd::PressureEstimate est = cfg.query_epsilon > 0.0
      ? bd::epsilon_pressure(sys, psi, cfg.depth, cfg.query_epsilon, cfg.budgets)
      : bd::pressure_partition_sum(sys, psi, cfg.depth, cfg.budgets);
  std::printf("P = %.9f\n", est.value);
  std::printf("method = %s  depth = %d  epsilon = %g  summands = %llu  variation_bound = %.3g\n",
              bd::pressure_method_name(est.method), est.depth, est.epsilon,
              static_cast<unsigned long long>(est.summands), est.variation_bound);
  return 0;
}

int run_root(const bd::RunConfig& cfg) {
  nlohmann::json desc;
  const bd::SkewSystem sys = make_system(cfg, desc);
  const bd::OmegaSpec omega = cfg.minorant_samples > 0 ? sampled_omega(sys, cfg) : make_omega(cfg);
  const bd::BowenRoot root = bd::bowen_root(sys, omega, 1e-9, cfg.root_depth, cfg.budgets);
  std::printf("t = %.9f\n", root.t);
  return 0;
}

int run_boxdim(const bd::RunConfig& cfg, double anchor) {
  nlohmann::json desc;
  const bd::SkewSystem sys = make_system(cfg, desc);
  const std::vector<double> ladder = cfg.scales.empty() ? bd::default_ladder(sys, cfg.depth) : cfg.scales;
  bd::SliceApprox slice;
  if (std::isnan(anchor)) {
    // seeded anchor: the cylinder midpoint of a random admissible word
    bd::SplitRng rng(cfg.seed, "cli", 1);
    bd::SymbolWord w;
    w.symbols.push_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(sys.branch_count()))));
    for (int k = 1; k < cfg.depth; ++k) {
      const auto succ = sys.transitions.successors(w.symbols.back());
      w.symbols.push_back(succ[rng.next_below(succ.size())]);
    }
    anchor = bd::cylinder_anchor_orbit(sys, w).front().base;
    slice = bd::stable_slice_approx(sys, anchor, w, cfg.depth, cfg.budgets);
  } else {
    slice = bd::stable_slice_approx(sys, anchor, cfg.depth, cfg.budgets);
  }
  const bd::BoxCountLadder fit = bd::box_dimension(sys, slice, ladder, cfg.budgets);
  std::printf("dim = %.9f\n", fit.slope);
  std::printf("stderr = %.9f\n", fit.stderr_slope);
  std::printf("anchor = %.9f  depth = %d  pieces = %zu  scales = %zu\n", anchor, cfg.depth, slice.piece_count(),
              ladder.size());
  std::filesystem::create_directories(cfg.output_dir);
  std::ofstream csv(std::filesystem::path(cfg.output_dir) / "boxdim_ladder.csv", std::ios::binary);
  csv << "epsilon,count,log_inv_eps,log_count\n";
  for (const auto& e : fit.entries) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.17g,%llu,%.17g,%.17g\n", e.epsilon,
                  static_cast<unsigned long long>(e.count), std::log(1.0 / e.epsilon),
                  std::log(static_cast<double>(std::max<std::uint64_t>(e.count, 1))));
    csv << buf;
  }
  if (!csv.good()) throw bd::ValidationError("output directory is not writable: " + cfg.output_dir);
  return 0;
}

int run_preimages(const bd::RunConfig& cfg, double x, double y, double y2) {
  nlohmann::json desc;
  const bd::SkewSystem sys = make_system(cfg, desc);
  if (!std::isnan(x)) {
    bd::PhasePoint p{x, std::isnan(y) ? 0.0 : y, std::isnan(y2) ? 0.0 : y2};
    const bd::PreimageReport rep = bd::count_preimages(sys, p, cfg.depth, -1.0, cfg.budgets);
    std::printf("count = %u  depth = %d  tolerance = %.3g\n", rep.count, rep.depth, rep.tolerance);
    for (const auto& c : rep.candidates)
      std::printf("branch %d: base = %.9f  fiber = (%.9f, %.9f)  distance = %.3g  %s\n", c.branch,
                  c.preimage.base, c.preimage.fiber1, c.preimage.fiber2, c.fiber_distance,
                  c.counted ? "counted" : "rejected");
    if (rep.inconsistency_warning)
      std::printf("warning: zero count, approximation inconsistent at this depth/tolerance\n");
    return 0;
  }
  const auto samples = bd::sample_lambda_points(sys, cfg.sample_size, cfg.depth, cfg.depth, cfg.seed, cfg.budgets);
  std::map<std::uint32_t, int> histogram;
  std::vector<bd::PhasePoint> pts;
  std::vector<std::uint32_t> counts;
  double worst_mass = 0.0;
  for (const auto& smp : samples) {
    const auto rep = bd::count_preimages(sys, smp.point, smp.itinerary, cfg.depth, -1.0, cfg.budgets);
    ++histogram[rep.count];
    pts.push_back(smp.point);
    counts.push_back(rep.count);
    const auto mass = bd::preimage_mass_identity(sys, smp.point, smp.itinerary, cfg.depth, -1.0, rep.count,
                                                 cfg.budgets);
    worst_mass = std::max(worst_mass, mass.residual);
  }
  for (const auto& [delta, n] : histogram)
    std::printf("delta = %u: %d samples (%.3f)\n", delta, n,
                static_cast<double>(n) / static_cast<double>(samples.size()));
  const bd::UscStatistic usc = bd::usc_statistic(pts, counts, 0.05);
  std::printf("mass identity worst residual = %.3g\n", worst_mass);
  std::printf("usc statistic (h = 0.05): fraction = %.3f over %llu pairs\n", usc.fraction,
              static_cast<unsigned long long>(usc.pairs));
  return 0;
}

int run_verify(const bd::RunConfig& cfg) {
  nlohmann::json desc;
  const bd::SkewSystem sys = make_system(cfg, desc);
  const bd::VerifyOptions opt = make_verify_options(cfg);
  std::vector<bd::VerificationReport> reports;
  auto want = [&](const std::string& c) { return cfg.claim == "all" || cfg.claim == c; };
  if (want("theorem1")) reports.push_back(bd::check_upper_bound(sys, desc, opt));
  if (want("prop_box_constancy")) reports.push_back(bd::check_box_constancy(sys, desc, opt));
  if (want("cor_inj")) reports.push_back(bd::check_injectivity_criterion(sys, desc, opt));
  if (want("cor_locconst")) reports.push_back(bd::check_locally_constant(sys, desc, opt));
  if (want("prop_max_density")) reports.push_back(bd::check_max_density(sys, desc, opt));
  if (reports.empty())
    throw bd::ConfigError("malformed config: unknown claim '" + cfg.claim +
                          "' (theorem1 | cor_inj | cor_locconst | prop_max_density | prop_box_constancy | all)");
  bd::emit_report(reports, cfg.output_dir);
  bool failed = false;
  for (const auto& rep : reports) {
    std::printf("%s: %s  margin = %.6g  lhs = %.6g  rhs = %.6g\n", rep.claim.c_str(), rep.verdict.c_str(),
                rep.margin, rep.lhs.value, rep.rhs.value);
    failed = failed || rep.verdict == "fail";
  }
  std::printf("reports written to %s\n", cfg.output_dir.c_str());
  return failed ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
  bd::RunConfig cfg;
  try {
    // the config file loads first so explicit flags override its values
    for (int i = 1; i + 1 < argc; ++i)
      if (std::string(argv[i]) == "--config") cfg = bd::parse_config_file(argv[i + 1]);

    CLI::App app{"pressure, Bowen roots, box dimensions and preimage multiplicities for hyperbolic skew products"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "sectioned key = value configuration file");

    auto entry = [&cfg](const char* section, const char* key) {
      return [&cfg, section, key](const std::string& v) { bd::apply_config_entry(cfg, section, key, v); };
    };
    app.add_option_function<std::string>("--system", entry("system", "kind"), "ifs | example1 | example2");
    app.add_option_function<std::string>("--depth", entry("run", "depth"), "approximation depth n");
    app.add_option_function<std::string>("--seed", entry("run", "seed"), "sampling seed (default 42)");
    app.add_option_function<std::string>("--output-dir", entry("run", "output_dir"), "where reports land");
    app.add_option_function<std::string>("--sample-size", entry("run", "sample_size"), "invariant-set sample size");
    app.add_option_function<std::string>("--anchor-count", entry("run", "anchor_count"), "slice anchors per check");
    app.add_option_function<std::string>("--tolerance", entry("run", "tolerance"), "comparison margin");
    app.add_option_function<std::string>("--root-depth", entry("run", "root_depth"), "partition depth for roots");
    app.add_option_function<std::string>("--ratios", entry("system", "ratios"), "ifs contraction ratios a,b,...");
    app.add_option_function<std::string>("--offsets", entry("system", "offsets"), "ifs fiber offsets a,b,...");
    app.add_option_function<std::string>("--flips", entry("system", "flips"), "ifs orientation flips 0/1 list");
    app.add_option_function<std::string>("--m", entry("system", "m"), "branch count");
    app.add_option_function<std::string>("--contraction", entry("system", "contraction"), "stable contraction");
    app.add_option_function<std::string>("--tau", entry("system", "tau"), "translations x1,y1,x2,y2,...");
    app.add_option_function<std::string>("--coupling", entry("system", "coupling"), "base-fiber coupling amplitude");
    app.add_option_function<std::string>("--alpha", entry("system", "alpha"), "overlap family parameter");
    app.add_option_function<std::string>("--half-width", entry("system", "half_width"), "carrier half width");
    app.add_option_function<std::string>("--s", entry("system", "s"), "fiber contractions s1,s2,s3,s4");
    app.add_option_function<std::string>("--scales", entry("ladder", "scales"), "box-count scales e1,e2,...");
    app.add_option_function<std::string>("--omega", entry("omega", "value"), "constant weight value");
    app.add_option_function<std::string>("--omega-table", entry("omega", "table"), "per-symbol weights");
    app.add_option_function<std::string>("--omega-samples", entry("omega", "samples"), "file of location value pairs");
    app.add_option_function<std::string>("--omega-modulus", entry("omega", "modulus"), "minorant Lipschitz budget");
    app.add_option_function<std::string>("--minorant-samples", entry("omega", "minorant_samples"),
                                         "sample count for a multiplicity minorant");
    app.add_option_function<std::string>("--max-words", entry("budgets", "max_words"), "word enumeration budget");
    app.add_option_function<std::string>("--max-grid-cells", entry("budgets", "max_grid_cells"), "grid cell budget");

    auto* cmd_pressure = app.add_subcommand("pressure", "partition-sum or fixed-scale pressure of t*Phi^s - log omega");
    cmd_pressure->add_option_function<std::string>("--t", entry("run", "t"), "potential multiplier");
    cmd_pressure->add_option_function<std::string>("--epsilon", entry("run", "epsilon"),
                                                   "positive scale switches to the fixed-scale pressure");
    auto* cmd_root = app.add_subcommand("root", "Bowen root of P(t*Phi^s - log omega) = 0");
    auto* cmd_boxdim = app.add_subcommand("boxdim", "box dimension of a stable slice");
    double anchor = std::nan("");
    cmd_boxdim->add_option("--anchor", anchor, "base anchor; omit for a seeded choice");
    auto* cmd_preimages = app.add_subcommand("preimages", "multiplicity statistics or a single point query");
    double qx = std::nan(""), qy = std::nan(""), qy2 = std::nan("");
    cmd_preimages->add_option("--x", qx, "base coordinate of one query point");
    cmd_preimages->add_option("--y", qy, "fiber coordinate of the query point");
    cmd_preimages->add_option("--y2", qy2, "second fiber coordinate (2-d fibers)");
    auto* cmd_verify = app.add_subcommand("verify", "check one claim or all of them");
    cmd_verify->add_option_function<std::string>("--claim", entry("run", "claim"),
                                                 "theorem1 | cor_inj | cor_locconst | prop_max_density | "
                                                 "prop_box_constancy | all");
    auto* cmd_report = app.add_subcommand("report", "run every claim and emit the full report set");
    for (auto* sub : {cmd_pressure, cmd_root, cmd_boxdim, cmd_preimages, cmd_verify, cmd_report})
      sub->fallthrough();

    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      std::cerr << "configuration error: " << e.what() << "\n";
      return 2;
    }

    if (cmd_pressure->parsed()) return run_pressure(cfg);
    if (cmd_root->parsed()) return run_root(cfg);
    if (cmd_boxdim->parsed()) return run_boxdim(cfg, anchor);
    if (cmd_preimages->parsed()) return run_preimages(cfg, qx, qy, qy2);
    if (cmd_verify->parsed()) return run_verify(cfg);
    if (cmd_report->parsed()) {
      bd::RunConfig all = cfg;
      all.claim = "all";
      return run_verify(all);
    }
    std::cerr << "configuration error: no subcommand given\n";
    return 2;
  } catch (const bd::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const bd::BudgetExceeded& e) {
    std::cerr << "configuration error: computation budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const bd::ValidationError& e) {
    std::cerr << "configuration error: invalid parameters: " << e.what() << "\n";
    return 2;
  } catch (const bd::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}
