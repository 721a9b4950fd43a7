#include "bowendim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

namespace bowendim {

void to_json(nlohmann::json& j, const QuantityValue& q) {
  j = nlohmann::json{{"value", q.value},
                     {"uncertainty", q.uncertainty},
                     {"method", q.method},
                     {"depth", q.depth},
                     {"epsilon", q.epsilon}};
}

std::vector<double> default_ladder(const SkewSystem& sys, int depth) {
  const double r = sys.sup_contraction;
  const double floor_scale = 4.0 * std::pow(r, depth);
  std::vector<double> ladder;
  for (int k = 2; k <= depth; ++k) {
    const double eps = std::pow(r, k);
    if (eps < floor_scale) break;
    ladder.push_back(eps);
  }
  if (ladder.size() < 4)
    throw ValidationError("default ladder needs depth at least 7; pass explicit scales");
  return ladder;
}

namespace {

// evidence note attached to every report: box dimension is the measured proxy
// and it dominates the Hausdorff dimension, so upper bounds transfer downward
const char* kDimensionNote =
    "upper bounds are certified for the upper box dimension of the slices, which dominates their "
    "Hausdorff dimension";

constexpr double kRootTol = 1e-9;

struct AnchorMeasure {
  double anchor = 0.0;
  BoxCountLadder fit;
};

SymbolWord random_word(const SkewSystem& sys, const std::vector<std::vector<int>>& succ, int length, SplitRng& rng) {
  SymbolWord w;
  w.symbols.reserve(static_cast<std::size_t>(length));
  w.symbols.push_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(sys.branch_count()))));
  for (int step = 1; step < length; ++step) {
    const auto& options = succ[w.symbols.back()];
    w.symbols.push_back(options[rng.next_below(options.size())]);
  }
  return w;
}

std::vector<AnchorMeasure> measure_anchors(const SkewSystem& sys, const VerifyOptions& opt,
                                           const std::vector<double>& ladder, int op_index, int min_anchors = 1) {
  std::vector<AnchorMeasure> out;
  if (!opt.anchors.empty()) {
    if (static_cast<int>(opt.anchors.size()) < min_anchors)
      throw ValidationError("verify: this check needs at least " + std::to_string(min_anchors) + " anchors");
    for (double a : opt.anchors) {
      const SliceApprox s = stable_slice_approx(sys, a, opt.depth, opt.budgets);
      out.push_back({a, box_dimension(sys, s, ladder, opt.budgets)});
    }
    return out;
  }
  const int count = std::max(opt.anchor_count, min_anchors);
  if (count < 1) throw ValidationError("verify: anchor count must be at least 1");
  std::vector<std::vector<int>> succ(sys.branch_count());
  for (int i = 0; i < sys.branch_count(); ++i) succ[i] = sys.transitions.successors(i);
  SplitRng rng(opt.seed, "verify", op_index);
  for (int k = 0; k < count; ++k) {
    const SymbolWord w = random_word(sys, succ, opt.depth, rng);
    const double a = cylinder_anchor_orbit(sys, w).front().base;
    const SliceApprox s = stable_slice_approx(sys, a, w, opt.depth, opt.budgets);
    out.push_back({a, box_dimension(sys, s, ladder, opt.budgets)});
  }
  return out;
}

nlohmann::json ladder_json(const std::vector<AnchorMeasure>& anchors) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& am : anchors) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : am.fit.entries)
      entries.push_back({{"epsilon", e.epsilon}, {"count", e.count}});
    arr.push_back({{"anchor", am.anchor},
                   {"slope", am.fit.slope},
                   {"stderr", am.fit.stderr_slope},
                   {"intercept", am.fit.intercept},
                   {"entries", entries}});
  }
  return arr;
}

nlohmann::json root_json(const BowenRoot& r) {
  return {{"t", r.t},
          {"residual", r.residual},
          {"t_lo", r.t_lo},
          {"t_hi", r.t_hi},
          {"pressure_lo", r.pressure_lo},
          {"pressure_hi", r.pressure_hi},
          {"clamped", r.clamped},
          {"method", pressure_method_name(r.method)},
          {"depth", r.depth}};
}

nlohmann::json omega_json(const OmegaSpec& omega) {
  switch (omega.kind) {
    case OmegaSpec::Kind::constant:
      return {{"kind", "constant"}, {"value", omega.constant}};
    case OmegaSpec::Kind::per_symbol:
      return {{"kind", "per_symbol"}, {"table", omega.table}};
    case OmegaSpec::Kind::minorant:
      return {{"kind", "minorant"},
              {"modulus", omega.lipschitz_minorant.modulus},
              {"breakpoints", omega.lipschitz_minorant.breakpoints.size()}};
  }
  return {};
}

nlohmann::json inputs_json(const nlohmann::json& system_desc, const VerifyOptions& opt,
                           const std::vector<double>& ladder, const OmegaSpec& omega) {
  return {{"system", system_desc}, {"depth", opt.depth},       {"ladder", ladder},
          {"seed", opt.seed},      {"sample_size", opt.sample_size}, {"tolerance", opt.tolerance},
          {"omega", omega_json(omega)}};
}

double root_uncertainty(const SkewSystem& sys, const BowenRoot& r) {
  const double min_abs_phi = std::max(1e-12, -std::log(sys.sup_contraction));
  return (r.t_hi - r.t_lo) / 2.0 + r.residual / min_abs_phi;
}

std::string verdict_for(double margin, double combined_uncertainty) {
  return margin >= -combined_uncertainty ? "pass" : "fail";
}

struct DeltaSampling {
  std::vector<LambdaSample> samples;
  std::vector<std::uint32_t> counts;
  std::map<std::uint32_t, int> histogram;
  int zero_count_samples = 0;
};

DeltaSampling sample_multiplicities(const SkewSystem& sys, const VerifyOptions& opt, int count,
                                    std::uint64_t sub_seed) {
  DeltaSampling out;
  out.samples = sample_lambda_points(sys, count, opt.depth, opt.depth, sub_seed, opt.budgets);
  out.counts.reserve(out.samples.size());
  for (const auto& smp : out.samples) {
    const PreimageReport rep = count_preimages(sys, smp.point, smp.itinerary, opt.depth, -1.0, opt.budgets);
    if (rep.count == 0) ++out.zero_count_samples;
    out.counts.push_back(rep.count);
    ++out.histogram[rep.count];
  }
  return out;
}

nlohmann::json histogram_json(const std::map<std::uint32_t, int>& hist) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : hist) j[std::to_string(k)] = v;
  return j;
}

std::uint64_t sub_seed(std::uint64_t seed, int op_index) {
  SplitRng rng(seed, "verify", op_index);
  return rng.next_u64();
}

// largest gap any sample has to its nearest neighbour (max-norm), plus the median
// of those gaps; reported so "dense sample" claims carry their coverage radius
std::pair<double, double> coverage_radii(const std::vector<LambdaSample>& samples) {
  const std::size_t n = samples.size();
  if (n < 2) return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  std::vector<double> nn(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& a = samples[i].point;
      const auto& b = samples[j].point;
      const double d =
          std::max({std::fabs(a.base - b.base), std::fabs(a.fiber1 - b.fiber1), std::fabs(a.fiber2 - b.fiber2)});
      nn[i] = std::min(nn[i], d);
    }
  }
  std::vector<double> sorted = nn;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  return {sorted.back(), median};
}

const AnchorMeasure& steepest(const std::vector<AnchorMeasure>& anchors) {
  return *std::max_element(anchors.begin(), anchors.end(),
                           [](const AnchorMeasure& a, const AnchorMeasure& b) { return a.fit.slope < b.fit.slope; });
}

} // namespace

VerificationReport check_upper_bound(const SkewSystem& sys, const nlohmann::json& system_desc,
                                     const VerifyOptions& opt) {
  VerificationReport rep;
  rep.claim = "theorem1";
  const std::vector<double> ladder = opt.ladder.empty() ? default_ladder(sys, opt.depth) : opt.ladder;

  OmegaSpec omega = opt.omega;
  if (opt.minorant_samples > 0) {
    const DeltaSampling ds = sample_multiplicities(sys, opt, opt.minorant_samples, sub_seed(opt.seed, 11));
    std::vector<MinorantSample> ms;
    ms.reserve(ds.samples.size());
    for (std::size_t i = 0; i < ds.samples.size(); ++i)
      ms.push_back({ds.samples[i].point.base, std::max<std::uint32_t>(ds.counts[i], 1) * 1.0});
    const OmegaMinorant minorant = build_omega_minorant(ms, opt.minorant_modulus);
    omega = OmegaSpec::from_minorant(minorant);
    rep.details["minorant"] = {{"modulus", minorant.modulus},
                               {"breakpoints", minorant.breakpoints},
                               {"values", minorant.values}};
    rep.details["delta_histogram"] = histogram_json(ds.histogram);
    rep.details["zero_count_samples"] = ds.zero_count_samples;
  }

  const BowenRoot root = bowen_root(sys, omega, kRootTol, opt.root_depth, opt.budgets);
  const auto anchors = measure_anchors(sys, opt, ladder, 10);
  const AnchorMeasure& worst = steepest(anchors);

  rep.inputs = inputs_json(system_desc, opt, ladder, omega);
  rep.lhs = {worst.fit.slope, std::max(opt.tolerance, 2.0 * worst.fit.stderr_slope), "regression", opt.depth,
             ladder.back()};
  rep.rhs = {root.t, root_uncertainty(sys, root), pressure_method_name(root.method), root.depth, 0.0};
  rep.margin = rep.rhs.value - rep.lhs.value;
  rep.verdict = verdict_for(rep.margin, rep.lhs.uncertainty + rep.rhs.uncertainty);
  rep.details["ladders"] = ladder_json(anchors);
  rep.details["root"] = root_json(root);
  rep.details["dimension_note"] = kDimensionNote;
  return rep;
}

VerificationReport check_box_constancy(const SkewSystem& sys, const nlohmann::json& system_desc,
                                       const VerifyOptions& opt) {
  VerificationReport rep;
  rep.claim = "prop_box_constancy";
  const std::vector<double> ladder = opt.ladder.empty() ? default_ladder(sys, opt.depth) : opt.ladder;
  const auto anchors = measure_anchors(sys, opt, ladder, 20, 5);

  double max_diff = 0.0;
  double pooled = 0.0;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    for (std::size_t j = i + 1; j < anchors.size(); ++j) {
      const double diff = std::fabs(anchors[i].fit.slope - anchors[j].fit.slope);
      if (diff >= max_diff) {
        max_diff = diff;
        pooled = std::sqrt(anchors[i].fit.stderr_slope * anchors[i].fit.stderr_slope +
                           anchors[j].fit.stderr_slope * anchors[j].fit.stderr_slope);
      }
    }
  }

  rep.inputs = inputs_json(system_desc, opt, ladder, opt.omega);
  rep.lhs = {max_diff, 2.0 * pooled, "regression", opt.depth, ladder.back()};
  rep.rhs = {opt.pairwise_tolerance, 0.0, "threshold", 0, 0.0};
  rep.margin = rep.rhs.value - rep.lhs.value;
  rep.verdict = verdict_for(rep.margin, rep.lhs.uncertainty + rep.rhs.uncertainty);
  rep.details["ladders"] = ladder_json(anchors);
  rep.details["dimension_note"] = kDimensionNote;
  return rep;
}

VerificationReport check_injectivity_criterion(const SkewSystem& sys, const nlohmann::json& system_desc,
                                               const VerifyOptions& opt) {
  VerificationReport rep;
  rep.claim = "cor_inj";
  const std::vector<double> ladder = opt.ladder.empty() ? default_ladder(sys, opt.depth) : opt.ladder;
  const BowenRoot root = bowen_root(sys, OmegaSpec::constant_value(1.0), kRootTol, opt.root_depth, opt.budgets);
  const auto anchors = measure_anchors(sys, opt, ladder, 30);
  const AnchorMeasure& worst = steepest(anchors);

  rep.inputs = inputs_json(system_desc, opt, ladder, OmegaSpec::constant_value(1.0));
  rep.details["ladders"] = ladder_json(anchors);
  rep.details["root"] = root_json(root);
  rep.details["dimension_note"] = kDimensionNote;

  const double trigger_gap = opt.tolerance + 2.0 * worst.fit.stderr_slope;
  rep.details["trigger"] = {{"max_slope", worst.fit.slope},
                            {"t1", root.t},
                            {"allowance", trigger_gap},
                            {"fired", worst.fit.slope >= root.t - trigger_gap}};
  if (worst.fit.slope < root.t - trigger_gap) {
    rep.lhs = {worst.fit.slope, 2.0 * worst.fit.stderr_slope, "regression", opt.depth, ladder.back()};
    rep.rhs = {root.t, root_uncertainty(sys, root), pressure_method_name(root.method), root.depth, 0.0};
    rep.margin = rep.rhs.value - rep.lhs.value;
    rep.verdict = "inconclusive";
    rep.details["not_applicable"] =
        "measured slope stays below the omega = 1 root, so the single-preimage criterion's hypothesis fails at "
        "this depth";
    return rep;
  }

  const DeltaSampling ds = sample_multiplicities(sys, opt, opt.sample_size, sub_seed(opt.seed, 31));
  int ones = 0;
  for (auto c : ds.counts) ones += c == 1 ? 1 : 0;
  const double fraction = ds.counts.empty() ? 0.0 : static_cast<double>(ones) / static_cast<double>(ds.counts.size());
  const auto [cover_max, cover_median] = coverage_radii(ds.samples);

  rep.lhs = {0.95, 0.0, "threshold", 0, 0.0};
  rep.rhs = {fraction, 0.0, "sampled_fraction", opt.depth, 0.0};
  rep.margin = rep.rhs.value - rep.lhs.value;
  rep.verdict = verdict_for(rep.margin, 0.0);
  rep.details["delta_histogram"] = histogram_json(ds.histogram);
  rep.details["zero_count_samples"] = ds.zero_count_samples;
  rep.details["coverage_radius"] = {{"max", cover_max}, {"median", cover_median}};
  return rep;
}

VerificationReport check_locally_constant(const SkewSystem& sys, const nlohmann::json& system_desc,
                                          const VerifyOptions& opt) {
  VerificationReport rep;
  rep.claim = "cor_locconst";
  const std::vector<double> ladder = opt.ladder.empty() ? default_ladder(sys, opt.depth) : opt.ladder;
  const DeltaSampling ds = sample_multiplicities(sys, opt, opt.sample_size, sub_seed(opt.seed, 40));

  // one multiplicity value per symbolic region, or the hypothesis fails
  std::vector<std::optional<std::uint32_t>> per_symbol(static_cast<std::size_t>(sys.branch_count()));
  bool mixed = false;
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const int sym = ds.samples[i].itinerary.symbols.front();
    auto& slot = per_symbol[static_cast<std::size_t>(sym)];
    if (!slot.has_value())
      slot = ds.counts[i];
    else if (*slot != ds.counts[i])
      mixed = true;
  }
  const bool missing = std::any_of(per_symbol.begin(), per_symbol.end(),
                                   [](const std::optional<std::uint32_t>& s) { return !s.has_value(); });

  rep.inputs = inputs_json(system_desc, opt, ladder, opt.omega);
  rep.details["delta_histogram"] = histogram_json(ds.histogram);
  rep.details["dimension_note"] = kDimensionNote;
  if (mixed || missing) {
    rep.lhs = {0.0, 0.0, "sampled_fraction", opt.depth, 0.0};
    rep.rhs = {0.0, 0.0, "threshold", 0, 0.0};
    rep.margin = 0.0;
    rep.verdict = "inconclusive";
    rep.details["not_applicable"] = mixed
        ? "sampled multiplicities are not constant per symbolic region at this depth"
        : "some symbolic region received no samples, so no multiplicity table can be formed";
    return rep;
  }

  std::vector<double> table;
  table.reserve(per_symbol.size());
  for (const auto& slot : per_symbol) table.push_back(std::max<std::uint32_t>(*slot, 1) * 1.0);
  const OmegaSpec omega = OmegaSpec::per_symbol(table);
  const BowenRoot root = bowen_root(sys, omega, kRootTol, opt.root_depth, opt.budgets);
  const auto anchors = measure_anchors(sys, opt, ladder, 41);

  double max_diff = 0.0;
  double se_at_max = 0.0;
  for (const auto& am : anchors) {
    const double diff = std::fabs(am.fit.slope - root.t);
    if (diff >= max_diff) {
      max_diff = diff;
      se_at_max = am.fit.stderr_slope;
    }
  }

  rep.inputs["omega"] = omega_json(omega);
  rep.lhs = {max_diff, 2.0 * se_at_max + root_uncertainty(sys, root), "regression", opt.depth, ladder.back()};
  rep.rhs = {opt.tolerance, 0.0, "threshold", 0, 0.0};
  rep.margin = rep.rhs.value - rep.lhs.value;
  rep.verdict = verdict_for(rep.margin, rep.lhs.uncertainty + rep.rhs.uncertainty);
  rep.details["multiplicity_table"] = table;
  rep.details["root"] = root_json(root);
  rep.details["ladders"] = ladder_json(anchors);
  return rep;
}

VerificationReport check_max_density(const SkewSystem& sys, const nlohmann::json& system_desc,
                                     const VerifyOptions& opt) {
  VerificationReport rep;
  rep.claim = "prop_max_density";
  const std::vector<double> ladder = opt.ladder.empty() ? default_ladder(sys, opt.depth) : opt.ladder;
  const DeltaSampling ds = sample_multiplicities(sys, opt, opt.sample_size, sub_seed(opt.seed, 50));

  std::uint32_t d = std::numeric_limits<std::uint32_t>::max();
  for (auto c : ds.counts)
    if (c >= 1) d = std::min(d, c);
  rep.inputs = inputs_json(system_desc, opt, ladder, opt.omega);
  rep.details["delta_histogram"] = histogram_json(ds.histogram);
  rep.details["zero_count_samples"] = ds.zero_count_samples;
  rep.details["dimension_note"] = kDimensionNote;
  if (ds.counts.empty() || d == std::numeric_limits<std::uint32_t>::max()) {
    rep.verdict = "inconclusive";
    rep.details["not_applicable"] = "no sample produced a positive multiplicity";
    return rep;
  }

  const BowenRoot root = bowen_root(sys, OmegaSpec::constant_value(static_cast<double>(d)), kRootTol,
                                    opt.root_depth, opt.budgets);
  const auto anchors = measure_anchors(sys, opt, ladder, 51);
  const AnchorMeasure& worst = steepest(anchors);
  rep.details["root"] = root_json(root);
  rep.details["ladders"] = ladder_json(anchors);
  rep.details["minimal_multiplicity"] = d;

  double spread = 0.0;
  for (std::size_t i = 0; i < anchors.size(); ++i)
    for (std::size_t j = i + 1; j < anchors.size(); ++j)
      spread = std::max(spread, std::fabs(anchors[i].fit.slope - anchors[j].fit.slope));
  rep.details["slope_spread"] = spread;

  const double trigger_gap = opt.tolerance + 2.0 * worst.fit.stderr_slope;
  rep.details["trigger"] = {{"max_slope", worst.fit.slope},
                            {"t_d", root.t},
                            {"allowance", trigger_gap},
                            {"fired", worst.fit.slope >= root.t - trigger_gap}};
  if (worst.fit.slope < root.t - trigger_gap) {
    rep.lhs = {worst.fit.slope, 2.0 * worst.fit.stderr_slope, "regression", opt.depth, ladder.back()};
    rep.rhs = {root.t, root_uncertainty(sys, root), pressure_method_name(root.method), root.depth, 0.0};
    rep.margin = rep.rhs.value - rep.lhs.value;
    rep.verdict = "inconclusive";
    rep.details["not_applicable"] =
        "measured slope stays below the minimal-multiplicity root, so the density predicate is vacuous at this "
        "depth";
    return rep;
  }

  int at_d = 0;
  for (auto c : ds.counts) at_d += c == d ? 1 : 0;
  const double fraction = static_cast<double>(at_d) / static_cast<double>(ds.counts.size());
  std::vector<PhasePoint> pts;
  pts.reserve(ds.samples.size());
  for (const auto& smp : ds.samples) pts.push_back(smp.point);
  const auto [cover_max, cover_median] = coverage_radii(ds.samples);
  const UscStatistic usc = usc_statistic(pts, ds.counts, std::max(2.0 * cover_median, 1e-12));

  rep.lhs = {0.95, 0.0, "threshold", 0, 0.0};
  rep.rhs = {fraction, 0.0, "sampled_fraction", opt.depth, 0.0};
  rep.margin = rep.rhs.value - rep.lhs.value;
  rep.verdict = verdict_for(rep.margin, 0.0);
  rep.details["coverage_radius"] = {{"max", cover_max}, {"median", cover_median}};
  rep.details["usc_statistic"] = {{"pairs", usc.pairs}, {"fraction", usc.fraction}};
  return rep;
}

} // namespace bowendim
