#include "bowendim/minorant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bowendim {

namespace {

double cone_min(const std::vector<MinorantSample>& samples, double modulus, double x) {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) v = std::min(v, s.value + modulus * std::abs(x - s.location));
  return v;
}

} // namespace

double OmegaMinorant::eval(double x) const {
  if (breakpoints.empty()) return 1.0;
  if (x <= breakpoints.front()) return values.front();
  if (x >= breakpoints.back()) return values.back();
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - breakpoints.begin());
  const std::size_t lo = hi - 1;
  const double span = breakpoints[hi] - breakpoints[lo];
  const double t = span > 0.0 ? (x - breakpoints[lo]) / span : 0.0;
  return values[lo] + t * (values[hi] - values[lo]);
}

OmegaMinorant build_omega_minorant(const std::vector<MinorantSample>& samples, double modulus) {
  if (samples.empty()) throw ValidationError("minorant: at least one sample required");
  if (modulus < 0.0) throw ValidationError("minorant: modulus must be nonnegative");
  for (const auto& s : samples)
    if (!(s.value >= 1.0)) throw ValidationError("minorant: sample values must be at least 1");

  // candidate breakpoints: sample apexes plus every pairwise cone crossing;
  // between consecutive candidates each cone is linear, so their min is too
  std::vector<double> xs;
  xs.reserve(samples.size() * 2);
  for (const auto& s : samples) xs.push_back(s.location);
  if (modulus > 0.0) {
    for (std::size_t i = 0; i < samples.size(); ++i)
      for (std::size_t j = i + 1; j < samples.size(); ++j) {
        const auto& a = samples[i];
        const auto& b = samples[j];
        // opposite cone slopes meet between the apexes
        const double cross = 0.5 * (a.location + b.location) + (b.value - a.value) / (2.0 * modulus);
        const double lo = std::min(a.location, b.location);
        const double hi = std::max(a.location, b.location);
        if (cross > lo && cross < hi) xs.push_back(cross);
      }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<double> raw;
  raw.reserve(xs.size());
  for (double x : xs) raw.push_back(cone_min(samples, modulus, x));

  // insert the points where the unclamped envelope crosses the floor so the
  // clamped envelope stays exactly piecewise linear, then clamp
  std::vector<double> bx, bv;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k > 0 && (raw[k - 1] - 1.0) * (raw[k] - 1.0) < 0.0) {
      const double t = (1.0 - raw[k - 1]) / (raw[k] - raw[k - 1]);
      bx.push_back(xs[k - 1] + t * (xs[k] - xs[k - 1]));
      bv.push_back(1.0);
    }
    bx.push_back(xs[k]);
    bv.push_back(std::max(1.0, raw[k]));
  }

  OmegaMinorant m;
  m.breakpoints = std::move(bx);
  m.values = std::move(bv);
  m.modulus = modulus;
  return m;
}

} // namespace bowendim
