#pragma once

#include "bowendim/systems.hpp"

namespace bowendim {

// finite-depth outer approximation of a stable slice: union over admissible
// backward words of the composed fiber images of the ambient fiber box
struct SliceApprox {
  int dimension = 1; // fiber dimension
  double anchor = 0.0;
  int depth = 0;
  std::vector<Interval> pieces; // 1-d: sorted, disjoint beyond merge_tol
  std::vector<Rect> rects;      // 2-d: kept unmerged
  double merge_tol = 1e-12;
  // largest diameter of a single composed image before merging; bounded by
  // (sup contraction)^depth times the fiber box size
  double max_constituent_diameter = 0.0;

  std::size_t piece_count() const { return dimension == 1 ? pieces.size() : rects.size(); }
  double total_length() const; // 1-d only: sum of piece lengths
};

struct BoxCount {
  double epsilon = 0.0;
  std::uint64_t count = 0;
  bool scale_below_merge_tol = false;
};

struct BoxCountLadder {
  std::vector<BoxCount> entries; // epsilon strictly decreasing
  double slope = 0.0;            // least-squares slope of log count vs log(1/epsilon)
  double stderr_slope = 0.0;
  double intercept = 0.0;
};

// depth-n slice over the anchor: one composed fiber image per admissible
// backward word; n = 0 yields the full fiber box. The anchor must survive n
// forward steps; escape raises a ValidationError naming the escape time.
SliceApprox stable_slice_approx(const SkewSystem& sys, double anchor, int n, const Budgets& budgets = {});

// same, with the anchor's forward itinerary already known (skips the forward
// survival walk, which is unreliable for strongly expanding bases)
SliceApprox stable_slice_approx(const SkewSystem& sys, double anchor, const SymbolWord& itinerary, int n,
                                const Budgets& budgets = {});

// occupied grid cells [k*eps, (k+1)*eps) per axis; pieces are counted with
// half-open extents so exact tilings land exactly (convention stated in reports)
BoxCount box_count(const SliceApprox& s, double eps, const Budgets& budgets = {});

// least-squares fit over a strictly decreasing ladder of at least 4 scales;
// the smallest scale must be >= 4 * (sup contraction)^depth so counts are not
// dominated by the approximation depth
BoxCountLadder box_dimension(const SkewSystem& sys, const SliceApprox& s, const std::vector<double>& ladder,
                             const Budgets& budgets = {});

// distance from a fiber point to the slice (max-norm for rectangles)
double slice_distance(const SliceApprox& s, double y1, double y2 = 0.0);

// image of the fiber interval under one branch's fiber action at base point x
// (endpoints swap under a negative scale)
Interval fiber_interval_image(const FiberMap& f, double x, const Interval& y, bool second = false);

} // namespace bowendim
