#include <doctest.h>

#include <cmath>
#include <set>

#include "bowendim/symbolic.hpp"

using namespace bowendim;

namespace {

TransitionStructure example2_transitions() {
  return TransitionStructure::from_rows({{1, 1, 0, 0}, {0, 0, 1, 1}, {1, 1, 0, 0}, {0, 0, 1, 1}});
}

} // namespace

TEST_CASE("full shift admits every pair") {
  const auto ts = TransitionStructure::full_shift(3);
  ts.validate();
  CHECK(ts.alphabet_size == 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(ts.entry(i, j));
  CHECK(ts.irreducible());
}

TEST_CASE("row construction rejects ragged and empty input") {
  CHECK_THROWS_AS(TransitionStructure::from_rows({}), ValidationError);
  CHECK_THROWS_AS(TransitionStructure::from_rows({{1, 0}, {1}}), ValidationError);
  CHECK_THROWS_AS(TransitionStructure::from_rows({{0, 1}, {0, 0}}).validate(), ValidationError);
}

TEST_CASE("reducible structure is detected") {
  // symbol 1 never returns to symbol 0
  const auto ts = TransitionStructure::from_rows({{1, 1}, {0, 1}});
  CHECK_FALSE(ts.irreducible());
  CHECK(example2_transitions().irreducible());
}

TEST_CASE("word counts on the full shift are m^n") {
  const auto ts = TransitionStructure::full_shift(4);
  std::uint64_t expect = 1;
  for (int n = 1; n <= 8; ++n) {
    expect *= 4;
    CHECK(count_words(ts, n) == expect);
  }
}

TEST_CASE("word counts on the two-predecessor structure are 2^(n+1)") {
  // every symbol has exactly two successors, so counts double per level
  const auto ts = example2_transitions();
  for (int n = 1; n <= 12; ++n) CHECK(count_words(ts, n) == (std::uint64_t{4} << (n - 1)));
}

TEST_CASE("enumeration matches the count and respects admissibility") {
  const auto ts = example2_transitions();
  const auto words = enumerate_words(ts, 5);
  CHECK(words.size() == count_words(ts, 5));
  std::set<std::vector<int>> seen;
  for (const auto& w : words) {
    CHECK(w.length() == 5);
    for (std::size_t k = 0; k + 1 < w.symbols.size(); ++k) CHECK(ts.entry(w.symbols[k], w.symbols[k + 1]));
    seen.insert(w.symbols);
  }
  CHECK(seen.size() == words.size());
}

TEST_CASE("per-leading enumeration partitions the full enumeration") {
  const auto ts = example2_transitions();
  const auto all = enumerate_words(ts, 6);
  std::vector<SymbolWord> glued;
  for (int lead = 0; lead < ts.alphabet_size; ++lead) {
    const auto part = enumerate_words_with_leading(ts, lead, 6);
    for (const auto& w : part) CHECK(w.symbols.front() == lead);
    glued.insert(glued.end(), part.begin(), part.end());
  }
  REQUIRE(glued.size() == all.size());
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(glued[i].symbols == all[i].symbols);
}

TEST_CASE("word budget is enforced") {
  Budgets tight;
  tight.max_words = 1000;
  CHECK_THROWS_AS(count_words(TransitionStructure::full_shift(10), 4, tight), BudgetExceeded);
  CHECK_THROWS_AS(enumerate_words(TransitionStructure::full_shift(10), 4, tight), BudgetExceeded);
}

TEST_CASE("topological entropy of the full m-shift is log m") {
  for (int m = 2; m <= 6; ++m)
    CHECK(topological_entropy(TransitionStructure::full_shift(m)) == doctest::Approx(std::log(m)).epsilon(1e-12));
}

TEST_CASE("topological entropy of the two-successor structure is log 2") {
  CHECK(topological_entropy(example2_transitions()) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("spectral radius matches hand computations") {
  // full 2x2 of ones: radius 2
  CHECK(spectral_radius({1, 1, 1, 1}, 2) == doctest::Approx(2.0).epsilon(1e-12));
  // rank-one weighted matrix: radius = 2 + 3
  CHECK(spectral_radius({2, 3, 2, 3}, 2) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("constant and table potentials evaluate pointwise") {
  const auto c = PotentialSpec::constant(-1.5);
  const auto tab = PotentialSpec::table({std::log(0.5), std::log(0.25)});
  PhasePoint p;
  p.base = 0.3;
  SymbolWord w;
  w.symbols = {1, 0};
  CHECK(c.eval(w, p) == doctest::Approx(-1.5));
  CHECK(tab.eval(w, p) == doctest::Approx(std::log(0.25)));
  CHECK(tab.eval_step(0, p) == doctest::Approx(std::log(0.5)));
}

TEST_CASE("birkhoff sum adds the sampled potential along the orbit") {
  const auto tab = PotentialSpec::table({1.0, 10.0, 100.0});
  std::vector<OrbitSample> orbit(3);
  orbit[0].word.symbols = {0, 1, 2};
  orbit[1].word.symbols = {1, 2};
  orbit[2].word.symbols = {2};
  CHECK(birkhoff_sum(tab, orbit) == doctest::Approx(111.0));
}
