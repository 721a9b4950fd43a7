#include <doctest.h>

#include <cmath>

#include "bowendim/pressure.hpp"
#include "bowendim/systems.hpp"

using namespace bowendim;

namespace {

SkewSystem full_shift_ifs(int m, double ratio) {
  IfsParams p;
  for (int i = 0; i < m; ++i) {
    p.ratios.push_back(ratio);
    p.offsets.push_back(i * (1.0 - ratio) / std::max(1, m - 1));
  }
  return build_ifs(p);
}

} // namespace

TEST_CASE("partition sum on the full 3-shift with zero potential is log 3 at every depth") {
  const auto sys = full_shift_ifs(3, 0.25);
  for (int n = 2; n <= 8; ++n) {
    const auto est = pressure_partition_sum(sys, PotentialSpec::constant(0.0), n);
    CHECK(est.value == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(est.summands == static_cast<std::uint64_t>(std::pow(3.0, n)));
    CHECK(est.method == PressureMethod::partition_sum);
  }
}

TEST_CASE("partition sum on the full 4-shift with psi = -log 4 vanishes") {
  const auto sys = full_shift_ifs(4, 0.2);
  for (int n = 2; n <= 10; ++n)
    CHECK(std::abs(pressure_partition_sum(sys, PotentialSpec::constant(-std::log(4.0)), n).value) <= 1e-10);
}

TEST_CASE("partition pressure equals spectral pressure after removing the word-count prefactor") {
  const auto sys = build_example2({});
  // symmetric weights: the partition sum is exactly 2^(n+1) * 2^(-tn), so the
  // (1/n) log proxy exceeds the spectral value by exactly log(2)/n
  const std::vector<double> tab(4, std::log(0.5));
  const auto exact = pressure_spectral(sys.transitions, tab);
  for (int n = 2; n <= 9; ++n) {
    const auto est = pressure_partition_sum(sys, PotentialSpec::table(tab), n);
    CHECK(est.value - std::log(2.0) / n == doctest::Approx(exact.value).epsilon(1e-10));
    CHECK(est.variation_bound == 0.0);
  }
}

TEST_CASE("increment pressure reaches the spectral value for asymmetric weights") {
  const auto sys = build_example2({});
  const std::vector<double> tab{-0.3, -1.1, 0.2, -0.7};
  const auto exact = pressure_spectral(sys.transitions, tab);
  // the second eigenvalue ratio is ~0.02 here, so the increment converges
  // geometrically; by depth 7 it sits below the solver tolerance
  for (int n = 7; n <= 10; ++n)
    CHECK(std::abs(pressure_increment(sys, PotentialSpec::table(tab), n).value - exact.value) <= 1e-9);
}

TEST_CASE("partition and spectral pressures agree exactly on full shifts") {
  const auto sys = full_shift_ifs(2, 0.4);
  const std::vector<double> tab{std::log(2.0), std::log(3.0)};
  const auto exact = pressure_spectral(sys.transitions, tab);
  CHECK(exact.value == doctest::Approx(std::log(5.0)).epsilon(1e-12));
  for (int n = 2; n <= 10; ++n)
    CHECK(pressure_partition_sum(sys, PotentialSpec::table(tab), n).value ==
          doctest::Approx(exact.value).epsilon(1e-9));
}

TEST_CASE("spectral pressure oracles") {
  const auto full3 = TransitionStructure::full_shift(3);
  CHECK(pressure_spectral(full3, {-1.0, -1.0, -1.0}).value == doctest::Approx(std::log(3.0) - 1.0));
  const auto e2 = build_example2({}).transitions;
  const double a = 0.35;
  CHECK(pressure_spectral(e2, std::vector<double>(4, std::log(a))).value ==
        doctest::Approx(std::log(2.0) + std::log(a)).epsilon(1e-10));
  CHECK_THROWS_AS(pressure_spectral(full3, {0.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(pressure_spectral(TransitionStructure::from_rows({{1, 1}, {0, 1}}), {0.0, 0.0}),
                  ValidationError);
}

TEST_CASE("pressure increment cancels the word-count prefactor") {
  const auto sys = build_example2({});
  const std::vector<double> tab(4, std::log(0.5));
  const auto exact = pressure_spectral(sys.transitions, tab);
  for (int n = 3; n <= 8; ++n) {
    const auto inc = pressure_increment(sys, PotentialSpec::table(tab), n);
    CHECK(inc.value == doctest::Approx(exact.value).epsilon(1e-10));
  }
  CHECK_THROWS_AS(pressure_increment(sys, PotentialSpec::constant(0.0), 1), ValidationError);
}

TEST_CASE("depth stability: doubled depth moves the estimate at most by the variation bound") {
  const auto sys = build_example1({3, 1.0 / 3, {{{0.03, 0.63}}, {{0.37, 0.37}}, {{0.63, 0.03}}}, {}}, 0.02);
  PotentialSpec psi;
  psi.evaluator = [](const SymbolWord&, const PhasePoint& p) { return -1.0 + 0.2 * std::sin(3.0 * p.base); };
  psi.holder_coeff = 0.6; // |d/dx| <= 0.6, so cylinder variation <= 0.6 * diam
  psi.holder_rate = 1.0 / 3;
  for (int n : {3, 4, 5}) {
    const auto shallow = pressure_partition_sum(sys, psi, n);
    const auto deep = pressure_partition_sum(sys, psi, 2 * n);
    CHECK(shallow.variation_bound > 0.0);
    CHECK(std::abs(deep.value - shallow.value) <= shallow.variation_bound);
  }
}

TEST_CASE("epsilon pressure with a coarse scale and zero potential vanishes") {
  const auto sys = full_shift_ifs(2, 0.5);
  // one grid cell spans everything: a single representative word remains
  CHECK(epsilon_pressure(sys, PotentialSpec::constant(0.0), 4, 10.0).value == doctest::Approx(0.0));
}

TEST_CASE("epsilon pressure approaches log 2 on the full 2-shift as the scale shrinks") {
  const auto sys = full_shift_ifs(2, 0.5);
  for (int n : {8, 9}) {
    const double eps = std::pow(2.0, -n);
    const auto est = epsilon_pressure(sys, PotentialSpec::constant(0.0), n, eps);
    CHECK(std::abs(est.value - std::log(2.0)) <= 0.05);
  }
}

TEST_CASE("epsilon pressure converges toward the partition sum on the overlap family") {
  const auto sys = build_example2({});
  const auto psi = PotentialSpec::table({-0.2, -0.5, -0.4, -0.3});
  const double target = pressure_partition_sum(sys, psi, 6).value;
  double prev_dev = 1e9;
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    const double dev = std::abs(epsilon_pressure(sys, psi, 6, eps).value - target);
    CHECK(dev <= prev_dev + 1e-12);
    prev_dev = dev;
  }
  CHECK(prev_dev <= 1e-9);
}

TEST_CASE("bowen root closed forms") {
  const auto full4 = build_ifs({{0.5, 0.5, 0.5, 0.5}, {0.0, 0.0, 0.5, 0.5}, {}});
  CHECK(bowen_root(full4, OmegaSpec::constant_value(1.0)).t == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(bowen_root(full4, OmegaSpec::constant_value(2.0)).t == doctest::Approx(1.0).epsilon(1e-9));
  const auto e2 = build_example2({});
  CHECK(bowen_root(e2, OmegaSpec::constant_value(1.0)).t == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("bowen root at exact zero pressure is unclamped") {
  const auto full4 = build_ifs({{0.5, 0.5, 0.5, 0.5}, {0.0, 0.0, 0.5, 0.5}, {}});
  const auto root = bowen_root(full4, OmegaSpec::constant_value(4.0));
  CHECK(root.t == 0.0);
  CHECK_FALSE(root.clamped);
  CHECK(root.residual <= 1e-10);
}

TEST_CASE("bowen root clamps when even t = 0 has negative pressure") {
  const auto full4 = build_ifs({{0.5, 0.5, 0.5, 0.5}, {0.0, 0.0, 0.5, 0.5}, {}});
  const auto root = bowen_root(full4, OmegaSpec::constant_value(8.0));
  CHECK(root.t == 0.0);
  CHECK(root.clamped);
}

TEST_CASE("bowen root carries a sign-correct bracket certificate") {
  const auto e2 = build_example2({});
  const auto root = bowen_root(e2, OmegaSpec::per_symbol({1.2, 1.0, 1.7, 1.1}));
  CHECK(root.residual <= 1e-9);
  CHECK(root.t_lo <= root.t);
  CHECK(root.t <= root.t_hi);
  CHECK(root.pressure_lo >= 0.0);
  CHECK(root.pressure_hi <= 0.0);
}

TEST_CASE("bowen root rejects nonnegative stable exponents and bad omegas") {
  const auto e2 = build_example2({});
  CHECK_THROWS_AS(bowen_root(e2, OmegaSpec::constant_value(0.5)), ValidationError);
  CHECK_THROWS_AS(bowen_root(e2, OmegaSpec::per_symbol({1.0, 1.0})), ValidationError);
  CHECK_THROWS_AS(bowen_root(e2, OmegaSpec::constant_value(1.0), -1.0), ValidationError);
}

TEST_CASE("pressure decreases strictly in t at controlled rate") {
  const auto e2 = build_example2({});
  const auto omega = OmegaSpec::constant_value(1.0);
  double inf_abs = 1e300;
  for (double v : e2.stable_log_derivative) inf_abs = std::min(inf_abs, std::abs(v));
  double prev = 1e300;
  for (double t : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    std::vector<double> phi(4);
    for (int j = 0; j < 4; ++j) phi[j] = t * e2.stable_log_derivative[j];
    const double p = pressure_spectral(e2.transitions, phi).value;
    if (prev < 1e299) CHECK(prev - p >= 0.5 * inf_abs - 1e-9);
    prev = p;
  }
}

TEST_CASE("larger omega never raises the root") {
  const auto e2 = build_example2({});
  SplitRng rng(99, "tests", 0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> w(4), wp(4);
    for (int j = 0; j < 4; ++j) {
      w[j] = 1.0 + 3.0 * rng.next_unit();
      wp[j] = w[j] * (1.0 + 2.0 * rng.next_unit());
    }
    const auto small = bowen_root(e2, OmegaSpec::per_symbol(w));
    const auto large = bowen_root(e2, OmegaSpec::per_symbol(wp));
    CHECK(small.t >= large.t - 1e-12);
  }
}

TEST_CASE("similarity dimension closed forms") {
  CHECK(similarity_dimension({0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(similarity_dimension({1.0 / 3, 1.0 / 3}) ==
        doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-10));
  CHECK(similarity_dimension({0.5}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(similarity_dimension({}), ValidationError);
  CHECK_THROWS_AS(similarity_dimension({1.5}), ValidationError);
}

TEST_CASE("variational gap vanishes exactly at the Gibbs weights") {
  const auto full2 = TransitionStructure::full_shift(2);
  const std::vector<double> phi{std::log(2.0), std::log(3.0)};
  CHECK(std::abs(variational_check(full2, phi, {0.4, 0.6})) <= 1e-10);
  CHECK(variational_check(full2, phi, {0.9, 0.1}) > 1e-3);
  CHECK(std::abs(variational_check(TransitionStructure::full_shift(3), {0.0, 0.0, 0.0},
                                   {1.0 / 3, 1.0 / 3, 1.0 / 3})) <= 1e-12);
  CHECK_THROWS_AS(variational_check(full2, phi, {0.7, 0.7}), ValidationError);
}

TEST_CASE("markov variational gap vanishes at the uniform equilibrium of the overlap structure") {
  const auto e2 = build_example2({}).transitions;
  const std::vector<double> phi(4, std::log(0.5));
  const std::vector<double> rows{0.5, 0.5, 0, 0, 0, 0, 0.5, 0.5, 0.5, 0.5, 0, 0, 0, 0, 0.5, 0.5};
  CHECK(std::abs(variational_check_markov(e2, phi, rows)) <= 1e-10);
  std::vector<double> skew = rows;
  skew[0] = 0.9;
  skew[1] = 0.1;
  skew[8] = 0.9;
  skew[9] = 0.1;
  CHECK(variational_check_markov(e2, phi, skew) > 1e-4);
  std::vector<double> off = rows;
  off[2] = 0.25; // weight on an inadmissible move
  off[0] = 0.25;
  CHECK_THROWS_AS(variational_check_markov(e2, phi, off), ValidationError);
}

TEST_CASE("bowen potential matches its definition for constant and minorant omegas") {
  const auto e2 = build_example2({});
  const auto psi = bowen_potential(e2, OmegaSpec::constant_value(2.0), 1.5);
  PhasePoint p;
  p.base = e2.base[1].domain.mid();
  SymbolWord w;
  w.symbols = {1};
  CHECK(psi.eval(w, p) == doctest::Approx(1.5 * std::log(0.5) - std::log(2.0)).epsilon(1e-12));

  const OmegaMinorant mino = build_omega_minorant({{0.2, 1.0}, {0.8, 2.0}}, 0.5);
  const auto psi2 = bowen_potential(e2, OmegaSpec::from_minorant(mino), 1.0);
  p.base = 0.2;
  w.symbols = {0};
  CHECK(psi2.eval(w, p) == doctest::Approx(std::log(0.5) - std::log(mino.eval(0.2))).epsilon(1e-12));
  CHECK(psi2.holder_coeff == doctest::Approx(0.5));
}
