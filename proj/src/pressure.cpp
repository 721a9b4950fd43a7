#include "bowendim/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace bowendim {

const char* pressure_method_name(PressureMethod m) {
  return m == PressureMethod::spectral ? "spectral" : "partition_sum";
}

namespace {

// words of length n with the given leading symbol, visited in lexicographic
// order; fn(word) is called with a reusable buffer
template <typename Fn>
void visit_words(const TransitionStructure& ts, int leading, int n, Fn&& fn) {
  std::vector<int> word;
  word.reserve(n);
  word.push_back(leading);
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(word.size()) == n) {
      fn(word);
      return;
    }
    const int last = word.back();
    for (int j = 0; j < ts.alphabet_size; ++j) {
      if (!ts.entry(last, j)) continue;
      word.push_back(j);
      self(self);
      word.pop_back();
    }
  };
  rec(rec);
}

std::vector<std::uint64_t> words_per_leading(const TransitionStructure& ts, int n) {
  const int m = ts.alphabet_size;
  // v[j] = words of the current tail length starting at j
  std::vector<std::uint64_t> v(m, 1);
  for (int step = 1; step < n; ++step) {
    std::vector<std::uint64_t> next(m, 0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (ts.entry(i, j)) next[i] += v[j];
    v = std::move(next);
  }
  return v;
}

double birkhoff_along_anchor(const SkewSystem& sys, const PotentialSpec& psi, const std::vector<int>& word,
                             std::vector<PhasePoint>& orbit_buf) {
  const int n = static_cast<int>(word.size());
  if (psi.locally_constant) {
    const auto& tab = *psi.locally_constant;
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += tab[static_cast<std::size_t>(word[k])];
    return s;
  }
  // anchor orbit by backward recursion: expansion never amplifies rounding
  orbit_buf.resize(n);
  double x = sys.base[word[n - 1]].domain.mid();
  orbit_buf[n - 1].base = x;
  for (int k = n - 2; k >= 0; --k) {
    x = sys.base[word[k]].inverse(x);
    orbit_buf[k].base = x;
  }
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += psi.eval_step(word[k], orbit_buf[k]);
  return s;
}

double reported_variation_bound(const PotentialSpec& psi, int n) {
  if (psi.locally_constant) return 0.0;
  if (psi.holder_rate >= 1.0) return psi.holder_coeff / n;
  // sum of cylinder variations over all levels, normalized per level
  return psi.holder_coeff * psi.holder_rate / (1.0 - psi.holder_rate) / n;
}

} // namespace

PressureEstimate pressure_partition_sum(const SkewSystem& sys, const PotentialSpec& psi, int n,
                                        const Budgets& budgets) {
  if (n < 1) throw ValidationError("partition sum: depth must be at least 1");
  const std::uint64_t total = count_words(sys.transitions, n, budgets);

  const int m = sys.transitions.alphabet_size;
  const auto per_leading = words_per_leading(sys.transitions, n);
  std::vector<std::uint64_t> offset(m + 1, 0);
  for (int i = 0; i < m; ++i) offset[i + 1] = offset[i] + per_leading[i];

  std::vector<double> terms(total);
  parallel_parts(m, [&](int lead) {
    std::vector<PhasePoint> orbit_buf;
    std::uint64_t idx = offset[lead];
    visit_words(sys.transitions, lead, n, [&](const std::vector<int>& word) {
      terms[idx++] = std::exp(birkhoff_along_anchor(sys, psi, word, orbit_buf));
    });
  });

  PressureEstimate est;
  est.value = std::log(pairwise_sum(terms)) / n;
  est.method = PressureMethod::partition_sum;
  est.depth = n;
  est.variation_bound = reported_variation_bound(psi, n);
  est.summands = total;
  return est;
}

PressureEstimate pressure_spectral(const TransitionStructure& ts, const std::vector<double>& phi) {
  ts.validate();
  const int m = ts.alphabet_size;
  if (static_cast<int>(phi.size()) != m)
    throw ValidationError("spectral pressure: potential table must match the alphabet");
  std::vector<double> mat(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (ts.entry(i, j)) mat[static_cast<std::size_t>(i) * m + j] = std::exp(phi[j]);
  PressureEstimate est;
  est.value = std::log(spectral_radius(mat, m));
  est.method = PressureMethod::spectral;
  est.depth = 0;
  est.variation_bound = 0.0;
  est.summands = 0;
  return est;
}

PressureEstimate pressure_increment(const SkewSystem& sys, const PotentialSpec& psi, int n,
                                    const Budgets& budgets) {
  if (n < 2) throw ValidationError("pressure increment: depth must be at least 2");
  const PressureEstimate deep = pressure_partition_sum(sys, psi, n, budgets);
  const PressureEstimate shallow = pressure_partition_sum(sys, psi, n - 1, budgets);
  PressureEstimate est;
  est.value = n * deep.value - (n - 1) * shallow.value;
  est.method = PressureMethod::partition_sum;
  est.depth = n;
  // the difference of the two log sums inherits both depths' anchor variation
  est.variation_bound = deep.variation_bound * n + shallow.variation_bound * (n - 1);
  est.summands = deep.summands + shallow.summands;
  return est;
}

PressureEstimate epsilon_pressure(const SkewSystem& sys, const PotentialSpec& psi, int n, double eps,
                                  const Budgets& budgets) {
  if (n < 1) throw ValidationError("epsilon pressure: depth must be at least 1");
  if (!(eps > 0.0)) throw ValidationError("epsilon pressure: scale must be positive");
  count_words(sys.transitions, n, budgets);

  // orbit cell key: per-step grid index of the anchor orbit; first word in
  // lexicographic order represents its cell
  std::map<std::vector<std::int64_t>, double> cells;
  std::vector<PhasePoint> orbit_buf;
  std::vector<std::int64_t> key(n);
  for (int lead = 0; lead < sys.transitions.alphabet_size; ++lead) {
    visit_words(sys.transitions, lead, n, [&](const std::vector<int>& word) {
      orbit_buf.resize(n);
      double x = sys.base[word[n - 1]].domain.mid();
      orbit_buf[n - 1].base = x;
      for (int k = n - 2; k >= 0; --k) {
        x = sys.base[word[k]].inverse(x);
        orbit_buf[k].base = x;
      }
      for (int k = 0; k < n; ++k)
        key[k] = static_cast<std::int64_t>(std::floor(orbit_buf[k].base / eps + 1e-9));
      if (cells.find(key) != cells.end()) return;
      if (cells.size() >= budgets.max_grid_cells)
        throw BudgetExceeded("epsilon pressure: occupied cells exceed grid budget");
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += psi.eval_step(word[k], orbit_buf[k]);
      cells.emplace(key, std::exp(s));
    });
  }

  std::vector<double> terms;
  terms.reserve(cells.size());
  for (const auto& kv : cells) terms.push_back(kv.second);
  PressureEstimate est;
  est.value = std::log(pairwise_sum(terms)) / n;
  est.method = PressureMethod::partition_sum;
  est.depth = n;
  est.epsilon = eps;
  est.variation_bound = reported_variation_bound(psi, n);
  est.summands = terms.size();
  return est;
}

OmegaSpec OmegaSpec::constant_value(double w) {
  OmegaSpec o;
  o.kind = Kind::constant;
  o.constant = w;
  return o;
}

OmegaSpec OmegaSpec::per_symbol(std::vector<double> values) {
  OmegaSpec o;
  o.kind = Kind::per_symbol;
  o.table = std::move(values);
  return o;
}

OmegaSpec OmegaSpec::from_minorant(OmegaMinorant m) {
  OmegaSpec o;
  o.kind = Kind::minorant;
  o.lipschitz_minorant = std::move(m);
  return o;
}

void OmegaSpec::validate(int alphabet_size) const {
  switch (kind) {
    case Kind::constant:
      if (!(constant >= 1.0)) throw ValidationError("omega: constant must be at least 1");
      break;
    case Kind::per_symbol:
      if (static_cast<int>(table.size()) != alphabet_size)
        throw ValidationError("omega: table must cover the alphabet");
      for (double v : table)
        if (!(v >= 1.0)) throw ValidationError("omega: table entries must be at least 1");
      break;
    case Kind::minorant:
      for (double v : lipschitz_minorant.values)
        if (!(v >= 1.0)) throw ValidationError("omega: minorant values must be at least 1");
      break;
  }
}

double OmegaSpec::eval(int symbol, double base_coord) const {
  switch (kind) {
    case Kind::constant:
      return constant;
    case Kind::per_symbol:
      return table[static_cast<std::size_t>(symbol)];
    case Kind::minorant:
      return lipschitz_minorant.eval(base_coord);
  }
  return 1.0;
}

PotentialSpec bowen_potential(const SkewSystem& sys, const OmegaSpec& omega, double t) {
  PotentialSpec psi;
  psi.evaluator = [&sys, omega, t](const SymbolWord& w, const PhasePoint& p) {
    const int sym = w.symbols.front();
    return t * sys.stable_log_derivative[static_cast<std::size_t>(sym)] - std::log(omega.eval(sym, p.base));
  };
  if (omega.locally_constant()) {
    std::vector<double> table(sys.stable_log_derivative.size());
    for (std::size_t j = 0; j < table.size(); ++j)
      table[j] = t * sys.stable_log_derivative[j] -
                 std::log(omega.eval(static_cast<int>(j), sys.base[j].domain.mid()));
    psi.locally_constant = std::move(table);
  } else {
    // log omega inherits the minorant's Lipschitz bound since omega >= 1, and
    // cylinder diameters shrink with the weakest base expansion
    double min_slope = std::numeric_limits<double>::infinity();
    for (const auto& b : sys.base) min_slope = std::min(min_slope, std::abs(b.slope));
    psi.holder_coeff = omega.lipschitz_minorant.modulus;
    psi.holder_rate = min_slope > 1.0 ? 1.0 / min_slope : 1.0;
  }
  return psi;
}

BowenRoot bowen_root(const SkewSystem& sys, const OmegaSpec& omega, double tol, int partition_depth,
                     const Budgets& budgets) {
  omega.validate(sys.transitions.alphabet_size);
  if (!(tol > 0.0)) throw ValidationError("bowen root: tolerance must be positive");
  double sup_phi = -std::numeric_limits<double>::infinity();
  for (double v : sys.stable_log_derivative) sup_phi = std::max(sup_phi, v);
  if (!(sup_phi < 0.0)) throw ValidationError("bowen root: stable potential must be strictly negative");

  const bool spectral = omega.locally_constant();
  const int m = sys.transitions.alphabet_size;
  std::function<double(double)> pressure_at;
  if (spectral) {
    pressure_at = [&sys, &omega, m](double t) {
      std::vector<double> phi(m);
      for (int j = 0; j < m; ++j)
        phi[j] = t * sys.stable_log_derivative[j] - std::log(omega.eval(j, sys.base[j].domain.mid()));
      return pressure_spectral(sys.transitions, phi).value;
    };
  } else {
    pressure_at = [&sys, &omega, partition_depth, &budgets](double t) {
      // the depth increment kills the (log word count)/n prefactor bias that
      // would otherwise shift the root by O(1/depth) on proper subshifts
      return pressure_increment(sys, bowen_potential(sys, omega, t), partition_depth, budgets).value;
    };
  }

  BowenRoot root;
  root.method = spectral ? PressureMethod::spectral : PressureMethod::partition_sum;
  root.depth = spectral ? 0 : partition_depth;

  const double p0 = pressure_at(0.0);
  const double pressure_tol = 1e-10;
  if (std::abs(p0) <= pressure_tol) {
    root.t = 0.0;
    root.residual = std::abs(p0);
    root.pressure_lo = root.pressure_hi = p0;
    return root;
  }
  if (p0 < 0.0) {
    root.t = 0.0;
    root.residual = std::abs(p0);
    root.clamped = true;
    root.pressure_lo = root.pressure_hi = p0;
    return root;
  }

  double lo = 0.0, hi = 1.0;
  double p_lo = p0, p_hi = pressure_at(hi);
  int doublings = 0;
  while (p_hi > 0.0) {
    lo = hi;
    p_lo = p_hi;
    hi *= 2.0;
    p_hi = pressure_at(hi);
    if (++doublings > 60) throw NumericalError("bowen root: failed to bracket a sign change");
  }

  double inf_abs_phi = std::numeric_limits<double>::infinity();
  double sup_abs_phi = 0.0;
  for (double v : sys.stable_log_derivative) {
    inf_abs_phi = std::min(inf_abs_phi, std::abs(v));
    sup_abs_phi = std::max(sup_abs_phi, std::abs(v));
  }
  // width target keeps |P(t)| <= tol via the mean-value slope bound
  const double width_target = tol / std::max(1.0, sup_abs_phi);
  for (int iter = 0; iter < 200 && hi - lo > width_target; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double pm = pressure_at(mid);
    if (pm >= 0.0) {
      lo = mid;
      p_lo = pm;
    } else {
      hi = mid;
      p_hi = pm;
    }
  }
  root.t = 0.5 * (lo + hi);
  root.residual = std::abs(pressure_at(root.t));
  root.t_lo = lo;
  root.t_hi = hi;
  root.pressure_lo = p_lo;
  root.pressure_hi = p_hi;
  return root;
}

double similarity_dimension(const std::vector<double>& ratios) {
  if (ratios.empty()) throw ValidationError("similarity dimension: ratio list must be nonempty");
  for (double r : ratios)
    if (!(r > 0.0 && r < 1.0)) throw ValidationError("similarity dimension: every ratio must lie in (0, 1)");
  auto f = [&ratios](double s) {
    double acc = 0.0;
    for (double r : ratios) acc += std::pow(r, s);
    return acc - 1.0;
  };
  double lo = 0.0;
  double f_lo = f(lo);
  if (std::abs(f_lo) <= 1e-13) return 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (f(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 60) throw NumericalError("similarity dimension: failed to bracket");
  }
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(fm) <= 1e-13 || hi - lo <= 1e-15) break;
    if (fm > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return mid;
}

namespace {

double entropy_of(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

} // namespace

double variational_check(const TransitionStructure& ts, const std::vector<double>& phi,
                         const std::vector<double>& bernoulli) {
  ts.validate();
  const int m = ts.alphabet_size;
  if (static_cast<int>(phi.size()) != m || static_cast<int>(bernoulli.size()) != m)
    throw ValidationError("variational check: potential and weights must cover the alphabet");
  for (std::size_t idx = 0; idx < ts.admissible.size(); ++idx)
    if (!ts.admissible[idx])
      throw ValidationError("variational check: Bernoulli weights require the full shift");
  double sum = 0.0;
  for (double v : bernoulli) {
    if (v < 0.0) throw ValidationError("variational check: weights must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ValidationError("variational check: weights must sum to 1 within 1e-12");
  double integral = 0.0;
  for (int i = 0; i < m; ++i) integral += bernoulli[i] * phi[i];
  return pressure_spectral(ts, phi).value - (entropy_of(bernoulli) + integral);
}

double variational_check_markov(const TransitionStructure& ts, const std::vector<double>& phi,
                                const std::vector<double>& stochastic_rows) {
  ts.validate();
  const int m = ts.alphabet_size;
  if (static_cast<int>(phi.size()) != m || stochastic_rows.size() != static_cast<std::size_t>(m) * m)
    throw ValidationError("variational check: potential and matrix must cover the alphabet");
  for (int i = 0; i < m; ++i) {
    double row = 0.0;
    for (int j = 0; j < m; ++j) {
      const double q = stochastic_rows[static_cast<std::size_t>(i) * m + j];
      if (q < 0.0) throw ValidationError("variational check: transition weights must be nonnegative");
      if (q > 0.0 && !ts.entry(i, j))
        throw ValidationError("variational check: transition weights must be supported on admissible moves");
      row += q;
    }
    if (std::abs(row - 1.0) > 1e-12)
      throw ValidationError("variational check: every row must sum to 1 within 1e-12");
  }
  // stationary vector by forward iteration of the row-stochastic matrix
  std::vector<double> pi(m, 1.0 / m), next(m, 0.0);
  for (int iter = 0; iter < 100'000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) next[j] += pi[i] * stochastic_rows[static_cast<std::size_t>(i) * m + j];
    double diff = 0.0;
    for (int j = 0; j < m; ++j) diff += std::abs(next[j] - pi[j]);
    pi = next;
    if (diff < 1e-14) break;
  }
  double h = 0.0, integral = 0.0;
  for (int i = 0; i < m; ++i) {
    integral += pi[i] * phi[i];
    for (int j = 0; j < m; ++j) {
      const double q = stochastic_rows[static_cast<std::size_t>(i) * m + j];
      if (q > 0.0) h -= pi[i] * q * std::log(q);
    }
  }
  return pressure_spectral(ts, phi).value - (h + integral);
}

} // namespace bowendim
