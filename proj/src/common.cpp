#include "bowendim/common.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace bowendim {

double pairwise_sum(std::span<const double> terms) {
  // balanced recursion keeps rounding independent of chunking; small base case
  // is summed left to right, which is itself a fixed order
  if (terms.size() <= 8) {
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
  }
  const std::size_t half = terms.size() / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

} // namespace

SplitRng::SplitRng(std::uint64_t seed, std::string_view module, std::uint64_t op_index) {
  state = seed ^ fnv1a(module);
  state ^= 0x632be59bd9b4e019ULL * (op_index + 1);
  // warm up so nearby keys decorrelate
  for (int i = 0; i < 4; ++i) splitmix64(state);
}

std::uint64_t SplitRng::next_u64() { return splitmix64(state); }

double SplitRng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
}

std::uint64_t SplitRng::next_below(std::uint64_t n) {
  // multiply-shift keeps the draw unbiased enough for sampling work here
  if (n == 0) return 0;
  return static_cast<std::uint64_t>(next_unit() * static_cast<double>(n)) % n;
}

int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("BOWEN_DIM_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) hw = std::min<long>(hw, v);
  }
  return hw;
}

void parallel_parts(int parts, const std::function<void(int)>& fn) {
  const int workers = std::min(parts, worker_count());
  if (workers <= 1) {
    for (int p = 0; p < parts; ++p) fn(p);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mu;
  std::atomic<int> next{0};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        int p = next.fetch_add(1);
        if (p >= parts) return;
        try {
          fn(p);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

} // namespace bowendim
