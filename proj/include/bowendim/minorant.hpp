#pragma once

#include <vector>

#include "bowendim/common.hpp"

namespace bowendim {

struct MinorantSample {
  double location = 0.0; // base coordinate of the sampled point
  double value = 1.0;    // observed preimage count there, >= 1
};

// largest piecewise-linear function with the declared Lipschitz constant that
// stays <= every sample value at its location and >= 1 everywhere: the clamped
// lower envelope min_i(value_i + modulus * |x - location_i|). Breakpoints
// include every envelope kink, so linear interpolation between them is exact;
// beyond the ends the envelope continues with constant value.
struct OmegaMinorant {
  std::vector<double> breakpoints; // strictly increasing
  std::vector<double> values;      // envelope value at each breakpoint, >= 1
  double modulus = 0.0;

  double eval(double x) const;
};

OmegaMinorant build_omega_minorant(const std::vector<MinorantSample>& samples, double modulus);

} // namespace bowendim
