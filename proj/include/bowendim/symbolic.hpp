#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bowendim/common.hpp"

namespace bowendim {

// admissibility matrix of a subshift of finite type: entry(i, j) says symbol j
// may follow symbol i
struct TransitionStructure {
  int alphabet_size = 0;
  std::vector<std::uint8_t> admissible; // row-major alphabet_size^2

  bool entry(int i, int j) const { return admissible[static_cast<std::size_t>(i) * alphabet_size + j] != 0; }
  std::vector<int> successors(int i) const;
  std::vector<int> predecessors(int j) const;

  static TransitionStructure full_shift(int m);
  static TransitionStructure from_rows(const std::vector<std::vector<int>>& rows);

  // every row nonempty and the matrix irreducible; throws ValidationError naming
  // the violated constraint otherwise
  void validate() const;
  bool irreducible() const;
};

struct SymbolWord {
  std::vector<int> symbols;
  int length() const { return static_cast<int>(symbols.size()); }
};

struct PhasePoint {
  double base = 0.0;
  double fiber1 = 0.0;
  double fiber2 = 0.0; // used only by 2-d fibers
};

// potential evaluated along orbits; when locally_constant is set the table is
// authoritative and the evaluator must agree on every cylinder
struct PotentialSpec {
  std::function<double(const SymbolWord&, const PhasePoint&)> evaluator;
  std::optional<std::vector<double>> locally_constant;
  // variation over a depth-n cylinder is bounded by holder_coeff * holder_rate^n
  double holder_coeff = 0.0;
  double holder_rate = 1.0;

  double eval(const SymbolWord& context, const PhasePoint& p) const;
  double eval_step(int symbol, const PhasePoint& p) const;
  double cylinder_variation(int depth) const;

  static PotentialSpec constant(double c);
  static PotentialSpec table(std::vector<double> values);
};

struct OrbitSample {
  SymbolWord word; // remaining symbol context at this step
  PhasePoint point;
};

// exact count of admissible words of each length 1..n (uint64, throws
// BudgetExceeded on overflow against the word budget)
std::uint64_t count_words(const TransitionStructure& ts, int n, const Budgets& budgets = {});

// all admissible words of length n in lexicographic order
std::vector<SymbolWord> enumerate_words(const TransitionStructure& ts, int n, const Budgets& budgets = {});

// words of length n starting with the given leading symbol, lexicographic;
// concatenating the per-symbol blocks in symbol order reproduces enumerate_words
std::vector<SymbolWord> enumerate_words_with_leading(const TransitionStructure& ts, int leading, int n,
                                                     const Budgets& budgets = {});

// sum of psi over the supplied orbit samples; orbit must be nonempty
double birkhoff_sum(const PotentialSpec& psi, std::span<const OrbitSample> orbit);

// log spectral radius of the admissibility matrix by power iteration
// (tolerance 1e-12, at most 1e5 iterations); requires irreducibility
double topological_entropy(const TransitionStructure& ts);

// Perron root of a nonnegative irreducible matrix (row-major m x m) by power
// iteration on a shifted, scaled copy; used for entropy and spectral pressure
double spectral_radius(const std::vector<double>& matrix, int m);

} // namespace bowendim
