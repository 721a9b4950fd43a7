#pragma once

#include <cstdint>
#include <limits>
#include <optional>

#include "bowendim/geometry.hpp"
#include "bowendim/minorant.hpp"

namespace bowendim {

// finite-depth membership for the invariant set: the base must survive the
// branch domains for n steps and the fiber must sit within tol of the depth-n
// slice over it
struct MembershipCheck {
  bool member = false;
  int escape_step = -1; // forward step at which the base left the domains; -1 = survived
  double fiber_distance = std::numeric_limits<double>::infinity();
};

MembershipCheck lambda_membership(const SkewSystem& sys, const PhasePoint& p, int n, double tol,
                                  const Budgets& budgets = {});

// trusted-itinerary variant: survival is certified by the caller's
// construction, so no forward base walk happens (expanding bases amplify
// rounding forward and would fake escapes at useful depths)
MembershipCheck lambda_membership(const SkewSystem& sys, const PhasePoint& p, const SymbolWord& itinerary, int n,
                                  double tol, const Budgets& budgets = {});

struct PreimageCandidate {
  int branch = -1;
  PhasePoint preimage;
  double fiber_distance = std::numeric_limits<double>::infinity();
  bool counted = false;
};

// multiplicity of a point at depth n: candidates are the admissible base-branch
// inverses, counted when the solved fiber preimage passes membership at depth n-1
struct PreimageReport {
  PhasePoint point;
  int depth = 0;
  double tolerance = 0.0;
  std::uint32_t count = 0;
  std::vector<PreimageCandidate> candidates;
  bool inconsistency_warning = false; // zero count despite the query passing membership
};

// tol <= 0 picks the approximant's own resolution (sup contraction)^n
PreimageReport count_preimages(const SkewSystem& sys, const PhasePoint& p, int n, double tol = -1.0,
                               const Budgets& budgets = {});
PreimageReport count_preimages(const SkewSystem& sys, const PhasePoint& p, const SymbolWord& itinerary, int n,
                               double tol = -1.0, const Budgets& budgets = {});

// the counted preimages each carry mass 1/count, so their total is 1 whenever
// the count is consistent; the recount below re-runs the per-branch queries
// against an optionally cached count and reports the mismatch
struct MassIdentity {
  std::uint32_t recount = 0;
  std::uint32_t assumed = 0; // cached count when supplied, else the recount
  double residual = 0.0;     // |recount / assumed - 1|
  bool flagged = false;
};

MassIdentity preimage_mass_identity(const SkewSystem& sys, const PhasePoint& p, int n, double tol = -1.0,
                                    std::optional<std::uint32_t> cached_count = {}, const Budgets& budgets = {});
MassIdentity preimage_mass_identity(const SkewSystem& sys, const PhasePoint& p, const SymbolWord& itinerary, int n,
                                    double tol = -1.0, std::optional<std::uint32_t> cached_count = {},
                                    const Budgets& budgets = {});

// a constructed member of the depth approximant together with the forward
// itinerary certifying its survival
struct LambdaSample {
  PhasePoint point;
  SymbolWord itinerary; // length fwd_depth, first symbol owns the base point
};

// fixed-seed members: the base is the cylinder anchor of a random admissible
// forward word, the fiber the midpoint of a random backward piece at least as
// deep, so every sample lies inside the approximant by construction
std::vector<LambdaSample> sample_lambda_points(const SkewSystem& sys, int count, int fwd_depth, int bwd_depth,
                                               std::uint64_t seed, const Budgets& budgets = {});

// sampled stand-in for upper semicontinuity of the multiplicity: over ordered
// pairs of samples within distance h, the fraction whose neighbour count does
// not exceed the centre's
struct UscStatistic {
  std::uint64_t pairs = 0;
  double fraction = 1.0; // vacuously 1 when no pair is that close
};

UscStatistic usc_statistic(const std::vector<PhasePoint>& points, const std::vector<std::uint32_t>& counts,
                           double h);

} // namespace bowendim
