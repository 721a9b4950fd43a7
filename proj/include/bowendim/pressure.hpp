#pragma once

#include "bowendim/minorant.hpp"
#include "bowendim/systems.hpp"

namespace bowendim {

enum class PressureMethod { partition_sum, spectral };

const char* pressure_method_name(PressureMethod m);

struct PressureEstimate {
  double value = 0.0;
  PressureMethod method = PressureMethod::partition_sum;
  int depth = 0;                 // 0 for spectral
  double epsilon = 0.0;          // spanning scale; 0 unless the epsilon variant
  double variation_bound = 0.0;  // Birkhoff distortion bound per level; 0 for locally constant
  std::uint64_t summands = 0;    // partition terms / spanning representatives
};

// weight function omega >= 1 entering the Bowen equation; a constant, a
// per-symbol table, or a sampled minorant evaluated at base coordinates
struct OmegaSpec {
  enum class Kind { constant, per_symbol, minorant };
  Kind kind = Kind::constant;
  double constant = 1.0;
  std::vector<double> table;
  OmegaMinorant lipschitz_minorant;

  static OmegaSpec constant_value(double w);
  static OmegaSpec per_symbol(std::vector<double> values);
  static OmegaSpec from_minorant(OmegaMinorant m);

  void validate(int alphabet_size) const;
  double eval(int symbol, double base_coord) const;
  bool locally_constant() const { return kind != Kind::minorant; }
};

struct BowenRoot {
  double t = 0.0;
  double residual = 0.0; // |pressure at t|
  double t_lo = 0.0;     // final bracket with pressure_lo >= 0 >= pressure_hi
  double t_hi = 0.0;
  double pressure_lo = 0.0;
  double pressure_hi = 0.0;
  bool clamped = false; // pressure already negative at t = 0
  PressureMethod method = PressureMethod::spectral;
  int depth = 0;
};

// (1/n) log sum over admissible depth-n words of exp(Birkhoff sum of psi along
// the cylinder midpoint orbit); terms are reduced with a pairwise tree in
// lexicographic word order
PressureEstimate pressure_partition_sum(const SkewSystem& sys, const PotentialSpec& psi, int n,
                                        const Budgets& budgets = {});

// log Perron root of M[i][j] = A[i][j] * exp(phi[j]) for locally constant phi
PressureEstimate pressure_spectral(const TransitionStructure& ts, const std::vector<double>& phi);

// consecutive-depth increment log Z_n - log Z_{n-1} of the partition sums;
// cancels the word-count prefactor C in Z_n ~ C * rho^n that biases the
// (1/n) log Z_n proxy by (log C)/n, so it converges geometrically for
// irreducible structures instead of O(1/n). used by the root solver when the
// potential is not locally constant
PressureEstimate pressure_increment(const SkewSystem& sys, const PotentialSpec& psi, int n,
                                    const Budgets& budgets = {});

// finite-scale spanning proxy: candidates are the depth-n cylinder anchor
// orbits, one representative (first in word order) per occupied eps-grid orbit
// cell; returns (1/n) log sum exp(Birkhoff) over representatives. Converges to
// the partition sum as eps shrinks below the anchor separation.
PressureEstimate epsilon_pressure(const SkewSystem& sys, const PotentialSpec& psi, int n, double eps,
                                  const Budgets& budgets = {});

// the potential t * Phi^s - log omega entering the Bowen equation; sys must
// outlive the returned spec (omega is copied into it)
PotentialSpec bowen_potential(const SkewSystem& sys, const OmegaSpec& omega, double t);

// unique zero of t -> P(t * stable potential - log omega) by bracketed
// bisection; spectral pressure when omega is locally constant, otherwise
// partition sums at partition_depth
BowenRoot bowen_root(const SkewSystem& sys, const OmegaSpec& omega, double tol = 1e-9, int partition_depth = 10,
                     const Budgets& budgets = {});

// root of sum ratios^s = 1, bisected to residual below 1e-12
double similarity_dimension(const std::vector<double>& ratios);

// pressure minus (entropy + integral) for a Bernoulli vector on the full
// shift; nonnegative, zero exactly at the Gibbs weights
double variational_check(const TransitionStructure& ts, const std::vector<double>& phi,
                         const std::vector<double>& bernoulli);

// same gap for a row-stochastic Markov matrix compatible with the transitions
double variational_check_markov(const TransitionStructure& ts, const std::vector<double>& phi,
                                const std::vector<double>& stochastic_rows);

} // namespace bowendim
