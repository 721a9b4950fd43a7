#include "bowendim/systems.hpp"

#include <algorithm>
#include <cmath>

namespace bowendim {

namespace {

constexpr double kPi = 3.14159265358979323846;

// smallest interval K with offset_range + scale * K inside K for every branch;
// iterated hull from the unit interval, converges since |scale| < 1
Interval invariant_fiber_box(const SkewSystem& sys, bool second_coord) {
  Interval box{0.0, 1.0};
  for (int iter = 0; iter < 200; ++iter) {
    double lo = box.lo, hi = box.hi;
    for (const auto& f : sys.fiber) {
      const double scale = second_coord ? f.scale2 : f.scale1;
      const Interval off = second_coord ? f.offset2_range : f.offset1_range;
      const double a = off.lo + std::min(scale * box.lo, scale * box.hi);
      const double b = off.hi + std::max(scale * box.lo, scale * box.hi);
      lo = std::min(lo, a);
      hi = std::max(hi, b);
    }
    if (lo >= box.lo - 1e-12 && hi <= box.hi + 1e-12) return {lo, hi};
    box = {lo, hi};
  }
  return box;
}

void finalize_contraction(SkewSystem& sys) {
  double inf = 1.0, sup = 0.0;
  for (const auto& f : sys.fiber) {
    double m1 = std::abs(f.scale1);
    inf = std::min(inf, m1);
    sup = std::max(sup, m1);
    if (sys.fiber_dim == 2) {
      double m2 = std::abs(f.scale2);
      inf = std::min(inf, m2);
      sup = std::max(sup, m2);
    }
  }
  sys.inf_contraction = inf;
  sys.sup_contraction = sup;
  sys.stable_potential = PotentialSpec::table(sys.stable_log_derivative);
  sys.fiber_box1 = invariant_fiber_box(sys, false);
  sys.fiber_box2 = sys.fiber_dim == 2 ? invariant_fiber_box(sys, true) : Interval{0.0, 0.0};
}

std::function<double(double)> constant_fn(double c) {
  return [c](double) { return c; };
}

std::function<double(double)> affine_fn(double c, double d) {
  return [c, d](double x) { return c + d * x; };
}

Interval affine_range(double c, double d, const Interval& domain) {
  const double a = c + d * domain.lo;
  const double b = c + d * domain.hi;
  return {std::min(a, b), std::max(a, b)};
}

} // namespace

int SkewSystem::symbol_of(double x) const {
  for (int i = 0; i < branch_count(); ++i)
    if (x >= base[i].domain.lo && x < base[i].domain.hi) return i;
  // right endpoints belong to the branch that owns them (relevant when domains tile [0,1])
  for (int i = branch_count() - 1; i >= 0; --i)
    if (x == base[i].domain.hi) return i;
  return -1;
}

SkewSystem build_ifs(const IfsParams& p) {
  const int m = static_cast<int>(p.ratios.size());
  if (m < 1) throw ValidationError("ifs: at least one branch required");
  if (p.offsets.size() != p.ratios.size())
    throw ValidationError("ifs: ratios and offsets must have equal counts");
  if (!p.flips.empty() && p.flips.size() != p.ratios.size())
    throw ValidationError("ifs: flips must be empty or match the branch count");
  for (double r : p.ratios)
    if (!(r > 0.0 && r < 1.0)) throw ValidationError("ifs: every ratio must lie in (0, 1)");

  SkewSystem sys;
  sys.kind = "ifs";
  sys.fiber_dim = 1;
  const double w = 1.0 / m;
  for (int i = 0; i < m; ++i) {
    BaseBranch b;
    b.domain = {i * w, (i + 1) * w};
    b.slope = m;
    b.intercept = -static_cast<double>(i);
    b.image = {0.0, 1.0};
    sys.base.push_back(b);

    FiberMap f;
    const bool flip = !p.flips.empty() && p.flips[i] != 0;
    f.scale1 = flip ? -p.ratios[i] : p.ratios[i];
    f.offset1 = constant_fn(p.offsets[i]);
    f.offset1_range = {p.offsets[i], p.offsets[i]};
    sys.fiber.push_back(f);
    sys.stable_log_derivative.push_back(std::log(p.ratios[i]));
  }
  sys.transitions = TransitionStructure::full_shift(m);
  finalize_contraction(sys);
  return sys;
}

std::vector<std::array<double, 2>> default_translations(int m, double contraction) {
  const double lo = 0.05 * (1.0 - contraction);
  const double hi = 0.95 * (1.0 - contraction);
  const double step = m > 1 ? (hi - lo) / (m - 1) : 0.0;
  std::vector<std::array<double, 2>> tau;
  tau.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) tau.push_back({lo + i * step, lo + (m - 1 - i) * step});
  return tau;
}

AdmissibilityReport check_admissible(const HorseshoeParams& p) {
  if (p.m < 3) throw ValidationError("horseshoe: m must be at least 3");
  if (!(p.contraction > 0.0 && p.contraction < 0.5))
    throw ValidationError("horseshoe: contraction must lie in (0, 1/2)");
  if (static_cast<int>(p.tau.size()) != p.m)
    throw ValidationError("horseshoe: tau must supply one translation pair per branch");

  AdmissibilityReport rep;
  rep.worst_margin = 1.0;
  for (int i = 0; i < p.m; ++i) {
    // stable image of the closed unit square under x -> contraction * x + tau
    Rect img;
    img.x = {p.tau[i][0], p.tau[i][0] + p.contraction};
    img.y = {p.tau[i][1], p.tau[i][1] + p.contraction};
    rep.branch_images.push_back(img);
    const double margin = std::min(std::min(img.x.lo, 1.0 - img.x.hi), std::min(img.y.lo, 1.0 - img.y.hi));
    rep.worst_margin = std::min(rep.worst_margin, margin);
  }
  rep.admissible = rep.worst_margin > 0.0;
  return rep;
}

SkewSystem build_example1(const HorseshoeParams& p, double z_coupling) {
  if (p.m < 3) throw ValidationError("horseshoe: m must be at least 3");
  if (!(p.contraction > 0.0 && p.contraction < 0.5))
    throw ValidationError("horseshoe: contraction must lie in (0, 1/2)");
  if (static_cast<int>(p.tau.size()) != p.m)
    throw ValidationError("horseshoe: tau must supply one translation pair per branch");

  std::vector<Interval> bases = p.base_intervals;
  if (bases.empty()) {
    for (int i = 0; i < p.m; ++i) bases.push_back({(i + 0.25) / p.m, (i + 0.75) / p.m});
  }
  if (static_cast<int>(bases.size()) != p.m)
    throw ValidationError("horseshoe: base interval count must equal m");
  for (int i = 0; i < p.m; ++i) {
    if (!(bases[i].lo > 0.0 && bases[i].hi < 1.0 && bases[i].lo < bases[i].hi))
      throw ValidationError("horseshoe: base intervals must be nondegenerate and strictly inside (0, 1)");
    if (i > 0 && bases[i].lo <= bases[i - 1].hi)
      throw ValidationError("horseshoe: base intervals must be disjoint and increasing");
  }

  const double couple = std::abs(z_coupling);
  SkewSystem sys;
  sys.kind = "example1";
  sys.fiber_dim = 2;
  for (int i = 0; i < p.m; ++i) {
    BaseBranch b;
    b.domain = bases[i];
    b.slope = 1.0 / bases[i].length();
    b.intercept = -bases[i].lo / bases[i].length();
    b.image = {0.0, 1.0};
    sys.base.push_back(b);

    FiberMap f;
    f.scale1 = p.contraction;
    f.scale2 = p.contraction;
    const double t1 = p.tau[i][0];
    const double t2 = p.tau[i][1];
    if (z_coupling == 0.0) {
      f.offset1 = constant_fn(t1);
      f.offset2 = constant_fn(t2);
      f.offset1_range = {t1, t1};
      f.offset2_range = {t2, t2};
    } else {
      const double c = z_coupling;
      f.offset1 = [t1, c](double x) { return t1 + c * std::sin(2.0 * kPi * x); };
      f.offset2 = [t2, c](double x) { return t2 + c * std::cos(2.0 * kPi * x); };
      f.offset1_range = {t1 - couple, t1 + couple};
      f.offset2_range = {t2 - couple, t2 + couple};
    }
    // stable image bounds of the closed unit square must stay strictly inside (0,1)^2
    const double xlo = f.offset1_range.lo, xhi = f.offset1_range.hi + p.contraction;
    const double ylo = f.offset2_range.lo, yhi = f.offset2_range.hi + p.contraction;
    if (!(xlo > 0.0 && xhi < 1.0 && ylo > 0.0 && yhi < 1.0))
      throw ValidationError("horseshoe: branch " + std::to_string(i) +
                            " stable image leaves the open unit square (translation inadmissible)");
    sys.fiber.push_back(f);
    sys.stable_log_derivative.push_back(std::log(p.contraction));
  }
  sys.transitions = TransitionStructure::full_shift(p.m);
  finalize_contraction(sys);
  return sys;
}

SkewSystem build_example2(const Example2Params& p) {
  if (!(p.alpha > 0.0 && p.alpha < 0.5))
    throw ValidationError("overlap family: alpha must lie in (0, 1/2)");
  const double eps = p.half_width < 0.0 ? p.alpha * p.alpha / 2.0 : p.half_width;
  if (!(eps > 0.0 && eps < p.alpha * p.alpha))
    throw ValidationError("overlap family: interval half-width must lie in (0, alpha^2)");
  const Interval i1{0.5 - eps, 0.5 + eps};
  const Interval i2{1.0 - p.alpha - eps, 1.0 - p.alpha + eps};
  if (!(i1.lo > 0.0 && i2.hi < 1.0 && i1.hi < i2.lo))
    throw ValidationError("overlap family: carrier intervals must be disjoint and inside (0, 1)");
  for (double s : p.s)
    if (!(std::abs(s - 0.5) < p.closeness))
      throw ValidationError("overlap family: every s must lie within the closeness budget of 1/2");
  // psi_1 ~ x, psi_2 ~ 1-x, psi_3 ~ 1 in C^1 within the closeness budget on [0,1]
  const double c0 = p.closeness;
  auto check_close = [c0](double dc, double ds, const char* name) {
    // affine deviation attains its sup at an endpoint of [0,1]
    if (std::max(std::abs(dc), std::abs(dc + ds)) > c0 || std::abs(ds) > c0)
      throw ValidationError(std::string("overlap family: ") + name + " exceeds the closeness budget");
  };
  check_close(p.psi_const[0] - 0.0, p.psi_slope[0] - 1.0, "psi_1 (vs x)");
  check_close(p.psi_const[1] - 1.0, p.psi_slope[1] + 1.0, "psi_2 (vs 1-x)");
  check_close(p.psi_const[2] - 1.0, p.psi_slope[2] - 0.0, "psi_3 (vs 1)");

  const double slope = 1.0 / (2.0 * eps); // both carrier maps expand onto [0,1]
  auto coarse_inverse = [slope](const Interval& carrier, const Interval& target) {
    return Interval{carrier.lo + target.lo / slope, carrier.lo + target.hi / slope};
  };
  // lexicographic symbols: 0 = 11, 1 = 12, 2 = 21, 3 = 22
  const Interval dom[4] = {coarse_inverse(i1, i1), coarse_inverse(i1, i2), coarse_inverse(i2, i1),
                           coarse_inverse(i2, i2)};
  const Interval img[4] = {i1, i2, i1, i2};
  const Interval carrier[4] = {i1, i1, i2, i2};

  SkewSystem sys;
  sys.kind = "example2";
  sys.fiber_dim = 1;
  // fiber assignment per branch: 11 -> psi_1 + s y, 12 -> psi_3 - s y,
  // 21 -> psi_2 + s y, 22 -> s y
  const double off_c[4] = {p.psi_const[0], p.psi_const[2], p.psi_const[1], 0.0};
  const double off_d[4] = {p.psi_slope[0], p.psi_slope[2], p.psi_slope[1], 0.0};
  const double scales[4] = {p.s[0], -p.s[1], p.s[2], p.s[3]};
  for (int b = 0; b < 4; ++b) {
    BaseBranch br;
    br.domain = dom[b];
    br.slope = slope;
    br.intercept = -carrier[b].lo * slope;
    br.image = img[b];
    sys.base.push_back(br);

    FiberMap f;
    f.scale1 = scales[b];
    f.offset1 = affine_fn(off_c[b], off_d[b]);
    f.offset1_range = affine_range(off_c[b], off_d[b], dom[b]);
    sys.fiber.push_back(f);
    sys.stable_log_derivative.push_back(std::log(std::abs(scales[b])));
  }
  sys.transitions = TransitionStructure::from_rows({{1, 1, 0, 0}, {0, 0, 1, 1}, {1, 1, 0, 0}, {0, 0, 1, 1}});
  finalize_contraction(sys);
  return sys;
}

Interval cylinder_interval(const SkewSystem& sys, const SymbolWord& w) {
  const int n = w.length();
  if (n < 1) throw ValidationError("cylinder: word must be nonempty");
  for (int k = 0; k + 1 < n; ++k)
    if (!sys.transitions.entry(w.symbols[k], w.symbols[k + 1]))
      throw ValidationError("cylinder: word is not admissible");
  Interval j = sys.base[w.symbols[n - 1]].domain;
  for (int k = n - 2; k >= 0; --k) {
    const BaseBranch& b = sys.base[w.symbols[k]];
    j = {b.inverse(j.lo), b.inverse(j.hi)};
  }
  return j;
}

std::vector<PhasePoint> cylinder_anchor_orbit(const SkewSystem& sys, const SymbolWord& w) {
  const int n = w.length();
  if (n < 1) throw ValidationError("cylinder: word must be nonempty");
  std::vector<PhasePoint> orbit(n);
  double x = sys.base[w.symbols[n - 1]].domain.mid();
  orbit[n - 1].base = x;
  for (int k = n - 2; k >= 0; --k) {
    x = sys.base[w.symbols[k]].inverse(x);
    orbit[k].base = x;
  }
  return orbit;
}

namespace {

void extend_backward(const SkewSystem& sys, std::vector<SymbolWord>& out, std::vector<int>& reversed, int remaining) {
  if (remaining == 0) {
    SymbolWord w;
    w.symbols.assign(reversed.rbegin(), reversed.rend());
    out.push_back(std::move(w));
    return;
  }
  const int successor = reversed.back();
  for (int i = 0; i < sys.transitions.alphabet_size; ++i) {
    if (!sys.transitions.entry(i, successor)) continue;
    reversed.push_back(i);
    extend_backward(sys, out, reversed, remaining - 1);
    reversed.pop_back();
  }
}

} // namespace

std::vector<SymbolWord> backward_words(const SkewSystem& sys, int terminal, int n, const Budgets& budgets) {
  if (terminal < 0 || terminal >= sys.branch_count())
    throw ValidationError("backward words: terminal symbol out of range");
  if (n < 1) throw ValidationError("backward words: depth must be at least 1");
  // budget estimate: predecessors are bounded by the alphabet, exact count below
  std::vector<std::uint64_t> counts(sys.branch_count(), 0);
  for (int i : sys.transitions.predecessors(terminal)) counts[i] = 1;
  for (int step = 1; step < n; ++step) {
    std::vector<std::uint64_t> next(sys.branch_count(), 0);
    std::uint64_t total = 0;
    for (int j = 0; j < sys.branch_count(); ++j) {
      if (counts[j] == 0) continue;
      for (int i : sys.transitions.predecessors(j)) {
        next[i] += counts[j];
        total += counts[j];
        if (next[i] > budgets.max_words || total > budgets.max_words)
          throw BudgetExceeded("backward words: count exceeds word budget");
      }
    }
    counts = std::move(next);
  }
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total > budgets.max_words) throw BudgetExceeded("backward words: count exceeds word budget");

  std::vector<SymbolWord> out;
  std::vector<int> reversed{terminal};
  extend_backward(sys, out, reversed, n);
  for (auto& w : out) w.symbols.pop_back(); // drop the terminal echo
  std::sort(out.begin(), out.end(), [](const SymbolWord& a, const SymbolWord& b) { return a.symbols < b.symbols; });
  return out;
}

std::vector<double> backward_orbit(const SkewSystem& sys, const SymbolWord& w, double x) {
  const int n = w.length();
  std::vector<double> pts(n);
  double v = x;
  for (int k = n - 1; k >= 0; --k) {
    v = sys.base[w.symbols[k]].inverse(v);
    pts[k] = v;
  }
  return pts;
}

int escape_time(const SkewSystem& sys, double x, int limit) {
  double v = x;
  for (int k = 0; k < limit; ++k) {
    const int s = sys.symbol_of(v);
    if (s < 0) return k;
    v = sys.base[s].forward(v);
  }
  return limit;
}

} // namespace bowendim
