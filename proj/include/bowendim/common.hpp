#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bowendim {

inline constexpr const char* kVersion = "0.1.0";

// raised when an input violates a documented precondition; message names the constraint
struct ValidationError : std::invalid_argument {
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// raised when a computation would exceed a configured word or grid budget
struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// raised when an iterative solver fails to reach its declared tolerance
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

struct Budgets {
  std::uint64_t max_words = 100'000'000;      // enumeration / partition-sum summands
  std::uint64_t max_grid_cells = 100'000'000; // rasterized cells across a box count
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

struct Rect {
  Interval x;
  Interval y;
};

// sums terms with a balanced pairwise tree over the given index order; the tree
// shape depends only on the length, so reports stay bit-identical across runs
// and thread counts
double pairwise_sum(std::span<const double> terms);

// splittable deterministic generator: one stream per (seed, module, op index)
struct SplitRng {
  std::uint64_t state;
  SplitRng(std::uint64_t seed, std::string_view module, std::uint64_t op_index);
  std::uint64_t next_u64();
  double next_unit();                 // [0, 1)
  std::uint64_t next_below(std::uint64_t n); // [0, n)
};

// worker cap: min(BOWEN_DIM_THREADS, hardware), at least 1
int worker_count();

// runs fn(part) for part = 0..parts-1 on up to worker_count() threads;
// exceptions are rethrown on the caller
void parallel_parts(int parts, const std::function<void(int)>& fn);

} // namespace bowendim
