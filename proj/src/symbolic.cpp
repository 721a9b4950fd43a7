#include "bowendim/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

namespace bowendim {

std::vector<int> TransitionStructure::successors(int i) const {
  std::vector<int> out;
  for (int j = 0; j < alphabet_size; ++j)
    if (entry(i, j)) out.push_back(j);
  return out;
}

std::vector<int> TransitionStructure::predecessors(int j) const {
  std::vector<int> out;
  for (int i = 0; i < alphabet_size; ++i)
    if (entry(i, j)) out.push_back(i);
  return out;
}

TransitionStructure TransitionStructure::full_shift(int m) {
  if (m < 1) throw ValidationError("transition structure: alphabet size must be positive");
  TransitionStructure ts;
  ts.alphabet_size = m;
  ts.admissible.assign(static_cast<std::size_t>(m) * m, 1);
  return ts;
}

TransitionStructure TransitionStructure::from_rows(const std::vector<std::vector<int>>& rows) {
  if (rows.empty()) throw ValidationError("transition structure: at least one symbol required");
  const int m = static_cast<int>(rows.size());
  TransitionStructure ts;
  ts.alphabet_size = m;
  ts.admissible.assign(static_cast<std::size_t>(m) * m, 0);
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(rows[i].size()) != m)
      throw ValidationError("transition structure: rows must form a square matrix");
    for (int j = 0; j < m; ++j) ts.admissible[static_cast<std::size_t>(i) * m + j] = rows[i][j] ? 1 : 0;
  }
  return ts;
}

bool TransitionStructure::irreducible() const {
  // boolean reachability: accumulate paths of length 1..m; irreducible iff every
  // ordered pair is connected by some positive-length path
  const int m = alphabet_size;
  std::vector<std::uint8_t> reach = admissible;
  std::vector<std::uint8_t> frontier = admissible;
  std::vector<std::uint8_t> next(static_cast<std::size_t>(m) * m);
  for (int step = 1; step < m; ++step) {
    std::fill(next.begin(), next.end(), 0);
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < m; ++k)
        if (frontier[static_cast<std::size_t>(i) * m + k])
          for (int j = 0; j < m; ++j)
            if (admissible[static_cast<std::size_t>(k) * m + j]) next[static_cast<std::size_t>(i) * m + j] = 1;
    for (std::size_t idx = 0; idx < reach.size(); ++idx) reach[idx] |= next[idx];
    frontier = next;
  }
  return std::all_of(reach.begin(), reach.end(), [](std::uint8_t v) { return v != 0; });
}

void TransitionStructure::validate() const {
  if (alphabet_size < 1) throw ValidationError("transition structure: alphabet size must be positive");
  if (admissible.size() != static_cast<std::size_t>(alphabet_size) * alphabet_size)
    throw ValidationError("transition structure: matrix size must equal alphabet size squared");
  for (int i = 0; i < alphabet_size; ++i) {
    bool any = false;
    for (int j = 0; j < alphabet_size; ++j) any = any || entry(i, j);
    if (!any) throw ValidationError("transition structure: every symbol needs at least one successor");
  }
  if (!irreducible()) throw ValidationError("transition structure: admissibility matrix must be irreducible");
}

double PotentialSpec::eval(const SymbolWord& context, const PhasePoint& p) const {
  if (locally_constant) {
    if (context.symbols.empty()) throw ValidationError("potential: locally constant table needs a symbol context");
    return (*locally_constant)[static_cast<std::size_t>(context.symbols.front())];
  }
  if (!evaluator) throw ValidationError("potential: no evaluator and no table");
  return evaluator(context, p);
}

double PotentialSpec::eval_step(int symbol, const PhasePoint& p) const {
  if (locally_constant) return (*locally_constant)[static_cast<std::size_t>(symbol)];
  if (!evaluator) throw ValidationError("potential: no evaluator and no table");
  thread_local SymbolWord scratch;
  scratch.symbols.assign(1, symbol);
  return evaluator(scratch, p);
}

double PotentialSpec::cylinder_variation(int depth) const {
  if (locally_constant) return 0.0;
  return holder_coeff * std::pow(holder_rate, depth);
}

PotentialSpec PotentialSpec::constant(double c) {
  PotentialSpec spec;
  spec.evaluator = [c](const SymbolWord&, const PhasePoint&) { return c; };
  spec.holder_coeff = 0.0;
  return spec;
}

PotentialSpec PotentialSpec::table(std::vector<double> values) {
  PotentialSpec spec;
  auto shared = std::make_shared<std::vector<double>>(values);
  spec.evaluator = [shared](const SymbolWord& w, const PhasePoint&) {
    return (*shared)[static_cast<std::size_t>(w.symbols.front())];
  };
  spec.locally_constant = std::move(values);
  spec.holder_coeff = 0.0;
  return spec;
}

std::uint64_t count_words(const TransitionStructure& ts, int n, const Budgets& budgets) {
  ts.validate();
  if (n < 1) throw ValidationError("word enumeration: length must be at least 1");
  const int m = ts.alphabet_size;
  // counts[j] = admissible words of the current length ending in j
  std::vector<std::uint64_t> counts(m, 1);
  std::uint64_t total = static_cast<std::uint64_t>(m);
  for (int step = 1; step < n; ++step) {
    std::vector<std::uint64_t> next(m, 0);
    for (int j = 0; j < m; ++j) {
      std::uint64_t acc = 0;
      for (int i = 0; i < m; ++i)
        if (ts.entry(i, j)) {
          acc += counts[i];
          if (acc > budgets.max_words) throw BudgetExceeded("word enumeration: count exceeds word budget");
        }
      next[j] = acc;
    }
    counts = std::move(next);
    total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    if (total > budgets.max_words) throw BudgetExceeded("word enumeration: count exceeds word budget");
  }
  return total;
}

namespace {

void extend_words(const TransitionStructure& ts, std::vector<SymbolWord>& out, SymbolWord& prefix, int remaining) {
  if (remaining == 0) {
    out.push_back(prefix);
    return;
  }
  const int last = prefix.symbols.back();
  for (int j = 0; j < ts.alphabet_size; ++j) {
    if (!ts.entry(last, j)) continue;
    prefix.symbols.push_back(j);
    extend_words(ts, out, prefix, remaining - 1);
    prefix.symbols.pop_back();
  }
}

} // namespace

std::vector<SymbolWord> enumerate_words_with_leading(const TransitionStructure& ts, int leading, int n,
                                                     const Budgets& budgets) {
  ts.validate();
  if (n < 1) throw ValidationError("word enumeration: length must be at least 1");
  if (leading < 0 || leading >= ts.alphabet_size)
    throw ValidationError("word enumeration: leading symbol out of range");
  count_words(ts, n, budgets); // budget pre-check before materializing
  std::vector<SymbolWord> out;
  SymbolWord prefix;
  prefix.symbols.push_back(leading);
  extend_words(ts, out, prefix, n - 1);
  return out;
}

std::vector<SymbolWord> enumerate_words(const TransitionStructure& ts, int n, const Budgets& budgets) {
  ts.validate();
  if (n < 1) throw ValidationError("word enumeration: length must be at least 1");
  count_words(ts, n, budgets);
  std::vector<SymbolWord> out;
  for (int lead = 0; lead < ts.alphabet_size; ++lead) {
    auto block = enumerate_words_with_leading(ts, lead, n, budgets);
    out.insert(out.end(), std::make_move_iterator(block.begin()), std::make_move_iterator(block.end()));
  }
  return out;
}

double birkhoff_sum(const PotentialSpec& psi, std::span<const OrbitSample> orbit) {
  if (orbit.empty()) throw ValidationError("birkhoff sum: orbit must be nonempty");
  std::vector<double> terms;
  terms.reserve(orbit.size());
  for (const auto& s : orbit) terms.push_back(psi.eval(s.word, s.point));
  return pairwise_sum(terms);
}

double spectral_radius(const std::vector<double>& matrix, int m) {
  if (m < 1 || matrix.size() != static_cast<std::size_t>(m) * m)
    throw ValidationError("spectral radius: matrix must be square and nonempty");
  double scale = 0.0;
  for (int i = 0; i < m; ++i) {
    double row = 0.0;
    for (int j = 0; j < m; ++j) {
      const double v = matrix[static_cast<std::size_t>(i) * m + j];
      if (v < 0.0) throw ValidationError("spectral radius: matrix must be nonnegative");
      row += v;
    }
    scale = std::max(scale, row);
  }
  if (scale == 0.0) return 0.0;
  // power-iterate B = M/scale + I: irreducible nonnegative plus positive diagonal
  // is primitive, so the iteration converges from a positive start for matrices
  // whose pattern may be periodic (the shift-by-identity trick)
  const double tol = 1e-12;
  const int max_iter = 100'000;
  std::vector<double> v(m, 1.0), w(m, 0.0);
  double lambda = 0.0;
  for (int iter = 0; iter < max_iter; ++iter) {
    double norm = 0.0;
    for (int i = 0; i < m; ++i) {
      double acc = v[i]; // identity shift
      const double* row = matrix.data() + static_cast<std::size_t>(i) * m;
      for (int j = 0; j < m; ++j) acc += row[j] / scale * v[j];
      w[i] = acc;
      norm = std::max(norm, acc);
    }
    const double prev = lambda;
    lambda = norm;
    for (int i = 0; i < m; ++i) v[i] = w[i] / norm;
    if (iter > 0 && std::abs(lambda - prev) <= tol * std::max(1.0, lambda))
      return scale * (lambda - 1.0);
  }
  throw NumericalError("spectral radius: power iteration did not converge within 1e5 iterations");
}

double topological_entropy(const TransitionStructure& ts) {
  ts.validate();
  const int m = ts.alphabet_size;
  std::vector<double> a(static_cast<std::size_t>(m) * m, 0.0);
  for (std::size_t idx = 0; idx < a.size(); ++idx) a[idx] = ts.admissible[idx] ? 1.0 : 0.0;
  return std::log(spectral_radius(a, m));
}

} // namespace bowendim
