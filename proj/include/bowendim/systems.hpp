#pragma once

#include <array>
#include <string>

#include "bowendim/symbolic.hpp"

namespace bowendim {

// expanding affine base branch g(x) = slope * x + intercept on domain,
// mapping it onto image (which covers every admissible successor's domain)
struct BaseBranch {
  Interval domain;
  double slope = 0.0;
  double intercept = 0.0;
  Interval image;

  double forward(double x) const { return slope * x + intercept; }
  double inverse(double y) const { return (y - intercept) / slope; }
};

// fiber action of one branch: per stable coordinate y' = offset(x) + scale * y;
// scale may be negative (orientation flip), |scale| < 1
struct FiberMap {
  double scale1 = 0.0;
  double scale2 = 0.0; // unused for 1-d fibers
  std::function<double(double)> offset1;
  std::function<double(double)> offset2;
  Interval offset1_range; // exact bounds of offset over the branch domain
  Interval offset2_range;

  double apply1(double x, double y) const { return offset1(x) + scale1 * y; }
  double apply2(double x, double y) const { return offset2(x) + scale2 * y; }
};

struct SkewSystem {
  std::string kind; // "ifs" | "example1" | "example2"
  int fiber_dim = 1;
  std::vector<BaseBranch> base;
  std::vector<FiberMap> fiber;
  TransitionStructure transitions;
  std::vector<double> stable_log_derivative; // per symbol: log |scale|
  PotentialSpec stable_potential;            // evaluates the table above
  Interval fiber_box1;                       // invariant ambient fiber interval(s)
  Interval fiber_box2;
  double inf_contraction = 0.0;
  double sup_contraction = 0.0;

  int branch_count() const { return static_cast<int>(base.size()); }
  // symbol of the branch whose domain contains x, or -1
  int symbol_of(double x) const;
};

struct IfsParams {
  std::vector<double> ratios;  // |scale| per branch, in (0, 1); sign via flips
  std::vector<double> offsets; // fiber offsets a_i
  std::vector<int> flips;      // optional: 1 = negative scale; empty = none
};

struct HorseshoeParams {
  int m = 3;                           // branch count, >= 3
  double contraction = 1.0 / 3.0;      // stable |derivative|, in (0, 1/2)
  std::vector<std::array<double, 2>> tau; // translation per branch
  std::vector<Interval> base_intervals;   // m disjoint compact subintervals of (0,1); empty = defaults
};

struct Example2Params {
  double alpha = 0.1;
  double half_width = -1.0; // < 0 means the default alpha^2 / 2
  std::array<double, 4> s = {0.5, 0.5, 0.5, 0.5}; // fiber contraction per branch (lexicographic symbols)
  // affine fiber offsets psi_i(x) = psi_const[i] + psi_slope[i] * x; defaults are x, 1-x, 1
  std::array<double, 3> psi_const = {0.0, 1.0, 1.0};
  std::array<double, 3> psi_slope = {1.0, -1.0, 0.0};
  double closeness = 0.05; // epsilon_0 budget for s_i and psi_i
};

struct AdmissibilityReport {
  bool admissible = false;
  double worst_margin = 0.0;       // distance from the worst image edge to the open unit square boundary
  std::vector<Rect> branch_images; // stable-part image of the unit square per branch
};

// full-shift base on [0,1] with affine fiber maps ratio_i * y + offset_i
SkewSystem build_ifs(const IfsParams& p);

// m-branch solenoid-like family: base expands each of m disjoint subintervals
// of (0,1) onto [0,1]; the two stable coordinates contract conformally with
// translation tau_i plus an optional smooth base coupling in the offsets
SkewSystem build_example1(const HorseshoeParams& p, double z_coupling);

// interval-arithmetic check that every branch maps the closed unit square
// strictly inside the open unit square (stable coordinates, coupling-free)
AdmissibilityReport check_admissible(const HorseshoeParams& p);

// staggered anti-diagonal translations, always admissible: neighbouring stable
// squares separate along alternating axes when the contraction is near 1/m
std::vector<std::array<double, 2>> default_translations(int m, double contraction);

// four-branch overlap family over two near-points 1/2 and 1-alpha: two tiny
// base intervals each split in two, fiber maps psi_1(x)+s_1 y, psi_3(x)-s_3 y,
// psi_2(x)+s_2 y, s_4 y in lexicographic branch order
SkewSystem build_example2(const Example2Params& p);

// --- cylinder machinery shared by pressure, geometry and sampling ---

// base interval of the forward cylinder of word w: points whose first
// length(w) branch symbols follow w
Interval cylinder_interval(const SkewSystem& sys, const SymbolWord& w);

// orbit of the cylinder midpoint: points x_k in branch w_k with g(x_k) = x_{k+1};
// computed by backward recursion from the deepest interval so expansion never
// amplifies rounding
std::vector<PhasePoint> cylinder_anchor_orbit(const SkewSystem& sys, const SymbolWord& w);

// backward words z -> x of length n: sequences w with A[w_k][w_{k+1}] and
// A[w_{n-1}][terminal] admissible; terminal is the symbol of the slice anchor
std::vector<SymbolWord> backward_words(const SkewSystem& sys, int terminal, int n, const Budgets& budgets = {});

// base points p_0..p_{n-1} of the backward orbit through word w ending at x
std::vector<double> backward_orbit(const SkewSystem& sys, const SymbolWord& w, double x);

// first step k < limit at which the forward base orbit leaves the branch
// domains, or limit if it survives; starts at k = 0 with x itself
int escape_time(const SkewSystem& sys, double x, int limit);

} // namespace bowendim
