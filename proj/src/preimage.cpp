#include "bowendim/preimage.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bowendim {

namespace {

double slice_gap(const SkewSystem& sys, const SliceApprox& s, const PhasePoint& p) {
  return sys.fiber_dim == 1 ? slice_distance(s, p.fiber1) : slice_distance(s, p.fiber1, p.fiber2);
}

} // namespace

MembershipCheck lambda_membership(const SkewSystem& sys, const PhasePoint& p, int n, double tol,
                                  const Budgets& budgets) {
  if (n < 1) throw ValidationError("membership: depth must be at least 1");
  MembershipCheck out;
  const int survived = escape_time(sys, p.base, n);
  if (survived < n) {
    out.escape_step = survived;
    return out;
  }
  const SliceApprox s = stable_slice_approx(sys, p.base, n, budgets);
  out.fiber_distance = slice_gap(sys, s, p);
  out.member = out.fiber_distance <= tol;
  return out;
}

MembershipCheck lambda_membership(const SkewSystem& sys, const PhasePoint& p, const SymbolWord& itinerary, int n,
                                  double tol, const Budgets& budgets) {
  if (n < 1) throw ValidationError("membership: depth must be at least 1");
  MembershipCheck out;
  const SliceApprox s = stable_slice_approx(sys, p.base, itinerary, n, budgets);
  out.fiber_distance = slice_gap(sys, s, p);
  out.member = out.fiber_distance <= tol;
  return out;
}

namespace {

PreimageReport count_core(const SkewSystem& sys, const PhasePoint& p, const SymbolWord* itinerary, int n,
                          double tol, const Budgets& budgets) {
  if (n < 1) throw ValidationError("preimages: depth must be at least 1");
  PreimageReport rep;
  rep.point = p;
  rep.depth = n;
  rep.tolerance = tol > 0.0 ? tol : std::pow(sys.sup_contraction, n);

  int here;
  if (itinerary != nullptr) {
    if (itinerary->symbols.empty()) throw ValidationError("preimages: itinerary must be nonempty");
    here = itinerary->symbols.front();
    if (here < 0 || here >= sys.branch_count() || !sys.base[here].domain.contains(p.base))
      throw ValidationError("preimages: itinerary does not match the base coordinate");
  } else {
    here = sys.symbol_of(p.base);
    if (here < 0) throw ValidationError("preimages: base coordinate lies outside every branch domain");
  }

  for (int i = 0; i < sys.branch_count(); ++i) {
    if (!sys.transitions.entry(i, here)) continue;
    const double xp = sys.base[i].inverse(p.base);
    if (!sys.base[i].domain.contains(xp)) continue; // branch image misses the point
    const FiberMap& f = sys.fiber[i];
    PreimageCandidate cand;
    cand.branch = i;
    cand.preimage.base = xp;
    cand.preimage.fiber1 = (p.fiber1 - f.offset1(xp)) / f.scale1;
    if (sys.fiber_dim == 2) cand.preimage.fiber2 = (p.fiber2 - f.offset2(xp)) / f.scale2;

    SliceApprox s;
    if (itinerary != nullptr) {
      SymbolWord extended;
      extended.symbols.reserve(itinerary->symbols.size() + 1);
      extended.symbols.push_back(i);
      extended.symbols.insert(extended.symbols.end(), itinerary->symbols.begin(), itinerary->symbols.end());
      s = stable_slice_approx(sys, xp, extended, n - 1, budgets);
    } else {
      s = stable_slice_approx(sys, xp, n - 1, budgets);
    }
    cand.fiber_distance = slice_gap(sys, s, cand.preimage);
    cand.counted = cand.fiber_distance <= rep.tolerance;
    if (cand.counted) ++rep.count;
    rep.candidates.push_back(std::move(cand));
  }
  rep.inconsistency_warning = rep.count == 0;
  return rep;
}

} // namespace

PreimageReport count_preimages(const SkewSystem& sys, const PhasePoint& p, int n, double tol,
                               const Budgets& budgets) {
  return count_core(sys, p, nullptr, n, tol, budgets);
}

PreimageReport count_preimages(const SkewSystem& sys, const PhasePoint& p, const SymbolWord& itinerary, int n,
                               double tol, const Budgets& budgets) {
  return count_core(sys, p, &itinerary, n, tol, budgets);
}

namespace {

MassIdentity mass_core(const SkewSystem& sys, const PhasePoint& p, const SymbolWord* itinerary, int n, double tol,
                       std::optional<std::uint32_t> cached_count, const Budgets& budgets) {
  const PreimageReport rep = count_core(sys, p, itinerary, n, tol, budgets);
  MassIdentity out;
  out.recount = rep.count;
  out.assumed = cached_count.value_or(rep.count);
  if (out.assumed == 0) {
    out.residual = 1.0; // no mass can be assigned without preimages
    out.flagged = true;
    return out;
  }
  out.residual = std::fabs(static_cast<double>(out.recount) / static_cast<double>(out.assumed) - 1.0);
  out.flagged = out.residual > 1e-12;
  return out;
}

} // namespace

MassIdentity preimage_mass_identity(const SkewSystem& sys, const PhasePoint& p, int n, double tol,
                                    std::optional<std::uint32_t> cached_count, const Budgets& budgets) {
  return mass_core(sys, p, nullptr, n, tol, cached_count, budgets);
}

MassIdentity preimage_mass_identity(const SkewSystem& sys, const PhasePoint& p, const SymbolWord& itinerary, int n,
                                    double tol, std::optional<std::uint32_t> cached_count, const Budgets& budgets) {
  return mass_core(sys, p, &itinerary, n, tol, cached_count, budgets);
}

std::vector<LambdaSample> sample_lambda_points(const SkewSystem& sys, int count, int fwd_depth, int bwd_depth,
                                               std::uint64_t seed, const Budgets& budgets) {
  if (count < 0) throw ValidationError("sampling: count must be nonnegative");
  if (fwd_depth < 1 || bwd_depth < 1) throw ValidationError("sampling: depths must be at least 1");
  (void)budgets;
  const int m = sys.branch_count();
  std::vector<std::vector<int>> succ(m), pred(m);
  for (int i = 0; i < m; ++i) {
    succ[i] = sys.transitions.successors(i);
    pred[i] = sys.transitions.predecessors(i);
  }

  SplitRng rng(seed, "preimage", 0);
  std::vector<LambdaSample> out;
  out.reserve(static_cast<std::size_t>(count));
  SymbolWord back;
  back.symbols.resize(static_cast<std::size_t>(bwd_depth));
  for (int k = 0; k < count; ++k) {
    LambdaSample smp;
    smp.itinerary.symbols.reserve(static_cast<std::size_t>(fwd_depth));
    smp.itinerary.symbols.push_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m))));
    for (int step = 1; step < fwd_depth; ++step) {
      const auto& options = succ[smp.itinerary.symbols.back()];
      smp.itinerary.symbols.push_back(options[rng.next_below(options.size())]);
    }
    const auto orbit = cylinder_anchor_orbit(sys, smp.itinerary);
    smp.point.base = orbit.front().base;

    int next = smp.itinerary.symbols.front();
    for (int step = bwd_depth - 1; step >= 0; --step) {
      const auto& options = pred[next];
      next = options[rng.next_below(options.size())];
      back.symbols[static_cast<std::size_t>(step)] = next;
    }
    const auto pts = backward_orbit(sys, back, smp.point.base);
    Interval y1 = sys.fiber_box1;
    Interval y2 = sys.fiber_box2;
    for (int step = 0; step < bwd_depth; ++step) {
      const FiberMap& f = sys.fiber[back.symbols[static_cast<std::size_t>(step)]];
      y1 = fiber_interval_image(f, pts[static_cast<std::size_t>(step)], y1, false);
      if (sys.fiber_dim == 2) y2 = fiber_interval_image(f, pts[static_cast<std::size_t>(step)], y2, true);
    }
    smp.point.fiber1 = y1.mid();
    if (sys.fiber_dim == 2) smp.point.fiber2 = y2.mid();
    out.push_back(std::move(smp));
  }
  return out;
}

UscStatistic usc_statistic(const std::vector<PhasePoint>& points, const std::vector<std::uint32_t>& counts,
                           double h) {
  if (points.size() != counts.size()) throw ValidationError("usc statistic: points and counts must align");
  if (!(h > 0.0)) throw ValidationError("usc statistic: radius must be positive");
  UscStatistic out;
  std::uint64_t good = 0;
  for (std::size_t c = 0; c < points.size(); ++c) {
    for (std::size_t q = 0; q < points.size(); ++q) {
      if (q == c) continue;
      const double d = std::max({std::fabs(points[c].base - points[q].base),
                                 std::fabs(points[c].fiber1 - points[q].fiber1),
                                 std::fabs(points[c].fiber2 - points[q].fiber2)});
      if (d > h) continue;
      ++out.pairs;
      if (counts[q] <= counts[c]) ++good;
    }
  }
  out.fraction = out.pairs == 0 ? 1.0 : static_cast<double>(good) / static_cast<double>(out.pairs);
  return out;
}

} // namespace bowendim
