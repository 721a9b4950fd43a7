#include "bowendim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_set>
#include <utility>

namespace bowendim {

double SliceApprox::total_length() const {
  double acc = 0.0;
  for (const auto& p : pieces) acc += p.length();
  return acc;
}

Interval fiber_interval_image(const FiberMap& f, double x, const Interval& y, bool second) {
  const double scale = second ? f.scale2 : f.scale1;
  const double off = second ? f.offset2(x) : f.offset1(x);
  const double a = off + scale * y.lo;
  const double b = off + scale * y.hi;
  return {std::min(a, b), std::max(a, b)};
}

namespace {

std::vector<Interval> merge_intervals(std::vector<Interval> raw, double tol) {
  std::sort(raw.begin(), raw.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  std::vector<Interval> out;
  for (const auto& piece : raw) {
    if (!out.empty() && piece.lo <= out.back().hi + tol)
      out.back().hi = std::max(out.back().hi, piece.hi);
    else
      out.push_back(piece);
  }
  return out;
}

SliceApprox slice_from_words(const SkewSystem& sys, double anchor, int terminal, int n, const Budgets& budgets) {
  SliceApprox s;
  s.dimension = sys.fiber_dim;
  s.anchor = anchor;
  s.depth = n;
  if (n == 0) {
    if (sys.fiber_dim == 1) {
      s.pieces.push_back(sys.fiber_box1);
      s.max_constituent_diameter = sys.fiber_box1.length();
    } else {
      s.rects.push_back({sys.fiber_box1, sys.fiber_box2});
      s.max_constituent_diameter = std::max(sys.fiber_box1.length(), sys.fiber_box2.length());
    }
    return s;
  }

  const auto words = backward_words(sys, terminal, n, budgets);
  std::vector<Interval> raw1;
  raw1.reserve(words.size());
  for (const auto& w : words) {
    const auto pts = backward_orbit(sys, w, anchor);
    Interval y1 = sys.fiber_box1;
    Interval y2 = sys.fiber_box2;
    for (int k = 0; k < n; ++k) {
      const FiberMap& f = sys.fiber[w.symbols[k]];
      y1 = fiber_interval_image(f, pts[k], y1, false);
      if (sys.fiber_dim == 2) y2 = fiber_interval_image(f, pts[k], y2, true);
    }
    if (sys.fiber_dim == 1) {
      raw1.push_back(y1);
      s.max_constituent_diameter = std::max(s.max_constituent_diameter, y1.length());
    } else {
      s.rects.push_back({y1, y2});
      s.max_constituent_diameter = std::max(s.max_constituent_diameter, std::max(y1.length(), y2.length()));
    }
  }
  if (sys.fiber_dim == 1) s.pieces = merge_intervals(std::move(raw1), s.merge_tol);
  return s;
}

} // namespace

SliceApprox stable_slice_approx(const SkewSystem& sys, double anchor, int n, const Budgets& budgets) {
  if (n < 0) throw ValidationError("slice: depth must be nonnegative");
  const int survive = escape_time(sys, anchor, n > 0 ? n : 1);
  if (survive < (n > 0 ? n : 1))
    throw ValidationError("slice: anchor escapes the surviving base set at step " + std::to_string(survive));
  const int terminal = sys.symbol_of(anchor);
  return slice_from_words(sys, anchor, terminal, n, budgets);
}

SliceApprox stable_slice_approx(const SkewSystem& sys, double anchor, const SymbolWord& itinerary, int n,
                                const Budgets& budgets) {
  if (n < 0) throw ValidationError("slice: depth must be nonnegative");
  if (itinerary.symbols.empty()) throw ValidationError("slice: itinerary must be nonempty");
  const int terminal = itinerary.symbols.front();
  if (terminal < 0 || terminal >= sys.branch_count() || !sys.base[terminal].domain.contains(anchor))
    throw ValidationError("slice: itinerary does not match the anchor");
  return slice_from_words(sys, anchor, terminal, n, budgets);
}

namespace {

// occupied cell range of a half-open extent [lo, hi) on the eps grid; the
// 1e-9-of-a-cell snap keeps exactly aligned endpoints on their own boundary
std::pair<std::int64_t, std::int64_t> cell_range(double lo, double hi, double eps) {
  const std::int64_t k_lo = static_cast<std::int64_t>(std::floor(lo / eps + 1e-9));
  std::int64_t k_hi =
      hi > lo ? static_cast<std::int64_t>(std::ceil(hi / eps - 1e-9)) - 1 : k_lo;
  if (k_hi < k_lo) k_hi = k_lo;
  return {k_lo, k_hi};
}

} // namespace

BoxCount box_count(const SliceApprox& s, double eps, const Budgets& budgets) {
  if (!(eps > 0.0)) throw ValidationError("box count: scale must be positive");
  BoxCount out;
  out.epsilon = eps;
  out.scale_below_merge_tol = eps < s.merge_tol;
  if (s.dimension == 1) {
    // pieces are disjoint and sorted, so occupied ranges merge in one pass
    std::int64_t prev_hi = 0;
    bool have_prev = false;
    std::uint64_t count = 0;
    for (const auto& p : s.pieces) {
      auto [k_lo, k_hi] = cell_range(p.lo, p.hi, eps);
      if (have_prev && k_lo <= prev_hi) k_lo = prev_hi + 1;
      if (k_hi < k_lo) continue;
      count += static_cast<std::uint64_t>(k_hi - k_lo + 1);
      if (count > budgets.max_grid_cells) throw BudgetExceeded("box count: occupied cells exceed grid budget");
      prev_hi = k_hi;
      have_prev = true;
    }
    out.count = count;
    return out;
  }
  // 2-d: rasterize each rectangle, dedupe across the unmerged union
  std::unordered_set<std::uint64_t> cells;
  for (const auto& r : s.rects) {
    auto [x_lo, x_hi] = cell_range(r.x.lo, r.x.hi, eps);
    auto [y_lo, y_hi] = cell_range(r.y.lo, r.y.hi, eps);
    const std::uint64_t span = static_cast<std::uint64_t>(x_hi - x_lo + 1) * static_cast<std::uint64_t>(y_hi - y_lo + 1);
    if (cells.size() + span > budgets.max_grid_cells)
      throw BudgetExceeded("box count: occupied cells exceed grid budget");
    for (std::int64_t kx = x_lo; kx <= x_hi; ++kx)
      for (std::int64_t ky = y_lo; ky <= y_hi; ++ky)
        cells.insert((static_cast<std::uint64_t>(kx + 2'000'000'000LL) << 32) ^
                     static_cast<std::uint64_t>(ky + 2'000'000'000LL));
  }
  out.count = cells.size();
  return out;
}

BoxCountLadder box_dimension(const SkewSystem& sys, const SliceApprox& s, const std::vector<double>& ladder,
                             const Budgets& budgets) {
  if (ladder.size() < 4) throw ValidationError("box dimension: ladder needs at least 4 scales");
  for (std::size_t i = 0; i + 1 < ladder.size(); ++i)
    if (!(ladder[i] > ladder[i + 1])) throw ValidationError("box dimension: ladder must be strictly decreasing");
  const double floor_scale = 4.0 * std::pow(sys.sup_contraction, s.depth);
  if (ladder.back() < floor_scale)
    throw ValidationError("box dimension: smallest scale must be at least 4 * (sup contraction)^depth; "
                          "deepen the approximant or coarsen the ladder");

  BoxCountLadder out;
  std::vector<double> xs, ys;
  for (double eps : ladder) {
    BoxCount bc = box_count(s, eps, budgets);
    out.entries.push_back(bc);
    xs.push_back(std::log(1.0 / eps));
    ys.push_back(std::log(static_cast<double>(std::max<std::uint64_t>(bc.count, 1))));
  }
  const std::size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (out.intercept + out.slope * xs[i]);
    rss += r * r;
  }
  out.stderr_slope = n > 2 ? std::sqrt(rss / (static_cast<double>(n) - 2.0) / sxx) : 0.0;
  return out;
}

double slice_distance(const SliceApprox& s, double y1, double y2) {
  double best = std::numeric_limits<double>::infinity();
  if (s.dimension == 1) {
    for (const auto& p : s.pieces) {
      double d = 0.0;
      if (y1 < p.lo)
        d = p.lo - y1;
      else if (y1 > p.hi)
        d = y1 - p.hi;
      best = std::min(best, d);
      if (best == 0.0) return 0.0;
    }
    return best;
  }
  for (const auto& r : s.rects) {
    double dx = 0.0, dy = 0.0;
    if (y1 < r.x.lo)
      dx = r.x.lo - y1;
    else if (y1 > r.x.hi)
      dx = y1 - r.x.hi;
    if (y2 < r.y.lo)
      dy = r.y.lo - y2;
    else if (y2 > r.y.hi)
      dy = y2 - r.y.hi;
    best = std::min(best, std::max(dx, dy));
    if (best == 0.0) return 0.0;
  }
  return best;
}

} // namespace bowendim
