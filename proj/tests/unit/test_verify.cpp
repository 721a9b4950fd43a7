#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "bowendim/report.hpp"
#include "bowendim/systems.hpp"
#include "bowendim/verify.hpp"

using namespace bowendim;

namespace {

SkewSystem cantor_ifs() { return build_ifs({{1.0 / 3, 1.0 / 3}, {0.0, 2.0 / 3}, {}}); }

nlohmann::json cantor_desc() { return {{"kind", "ifs"}, {"ratios", {1.0 / 3, 1.0 / 3}}}; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("default ladder reproduces the canonical geometric scales") {
  const auto thirds = cantor_ifs();
  const auto l10 = default_ladder(thirds, 10);
  REQUIRE(l10.size() == 7);
  for (int k = 0; k < 7; ++k) CHECK(l10[k] == doctest::Approx(std::pow(3.0, -(k + 2))).epsilon(1e-12));

  const auto halves = build_ifs({{0.5, 0.5}, {0.0, 0.5}, {}});
  const auto l12 = default_ladder(halves, 12);
  REQUIRE(l12.size() == 9);
  for (int k = 0; k < 9; ++k) CHECK(l12[k] == doctest::Approx(std::pow(2.0, -(k + 2))).epsilon(1e-12));

  CHECK_THROWS_AS(default_ladder(thirds, 6), ValidationError);
  CHECK(default_ladder(thirds, 7).size() == 4);
}

TEST_CASE("upper bound check passes on the no-overlap oracle with explicit anchors") {
  VerifyOptions opt;
  opt.depth = 10;
  opt.tolerance = 0.03;
  opt.anchors = {0.0, 0.25};
  const auto rep = check_upper_bound(cantor_ifs(), cantor_desc(), opt);
  CHECK(rep.claim == "theorem1");
  CHECK(rep.verdict == "pass");
  CHECK(rep.lhs.value == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-6));
  CHECK(rep.rhs.value == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-8));
  CHECK(rep.lhs.method == "regression");
  CHECK(rep.rhs.method == "spectral");
  CHECK(rep.margin == doctest::Approx(rep.rhs.value - rep.lhs.value));
  CHECK(rep.details.contains("dimension_note"));
  CHECK(rep.inputs.at("system").at("kind") == "ifs");
}

TEST_CASE("upper bound check accepts a sampled minorant omega") {
  VerifyOptions opt;
  opt.depth = 10;
  opt.sample_size = 120;
  opt.minorant_samples = 120;
  const auto rep = check_upper_bound(build_example2({}), {{"kind", "example2"}}, opt);
  CHECK(rep.verdict == "pass");
  // omega >= 1 pins the root at or below the omega = 1 value
  CHECK(rep.rhs.value <= 1.0 + 1e-9);
  CHECK(rep.rhs.value >= 0.9);
  CHECK(rep.details.contains("minorant"));
  CHECK(rep.details.at("delta_histogram").size() >= 1);
}

TEST_CASE("verification reports are deterministic functions of their options") {
  VerifyOptions opt;
  opt.depth = 9;
  opt.sample_size = 60;
  const auto sys = build_example2({});
  const auto a = check_injectivity_criterion(sys, {{"kind", "example2"}}, opt);
  const auto b = check_injectivity_criterion(sys, {{"kind", "example2"}}, opt);
  const nlohmann::json ja = {{"lhs", a.lhs}, {"rhs", a.rhs}, {"margin", a.margin},
                             {"verdict", a.verdict}, {"details", a.details}};
  const nlohmann::json jb = {{"lhs", b.lhs}, {"rhs", b.rhs}, {"margin", b.margin},
                             {"verdict", b.verdict}, {"details", b.details}};
  CHECK(ja.dump() == jb.dump());
}

TEST_CASE("box constancy insists on five anchors and passes on the overlap family") {
  VerifyOptions opt;
  opt.depth = 10;
  opt.anchor_count = 2; // silently raised to the minimum for spread checks
  const auto rep = check_box_constancy(build_example2({}), {{"kind", "example2"}}, opt);
  CHECK(rep.claim == "prop_box_constancy");
  CHECK(rep.verdict == "pass");
  CHECK(rep.details.at("ladders").size() >= 5);
  CHECK(rep.rhs.value == doctest::Approx(0.05));
}

TEST_CASE("injectivity criterion passes where branches never overlap") {
  VerifyOptions opt;
  opt.depth = 10;
  opt.sample_size = 80;
  const auto rep = check_injectivity_criterion(cantor_ifs(), cantor_desc(), opt);
  CHECK(rep.verdict == "pass");
  CHECK(rep.rhs.value == doctest::Approx(1.0)); // every sampled point has one preimage
  CHECK(rep.details.at("trigger").at("fired") == true);
}

TEST_CASE("injectivity criterion fails honestly when overlaps are wide") {
  // widening the overlap family pushes more sampled points onto two preimages
  // while the slice slope stays within the allowance of t1, so the trigger
  // fires and the single-preimage fraction honestly misses the 95% bar
  VerifyOptions opt;
  opt.depth = 10;
  opt.sample_size = 200;
  Example2Params wide;
  wide.alpha = 0.2;
  const auto rep = check_injectivity_criterion(build_example2(wide), {{"kind", "example2"}}, opt);
  CHECK(rep.details.at("trigger").at("fired") == true);
  CHECK(rep.verdict == "fail");
  CHECK(rep.rhs.value < 0.95);
  CHECK(rep.rhs.value > 0.5);
}

TEST_CASE("injectivity trigger stays quiet when coinciding branches collapse the slice") {
  // both branches implement the same contraction, so the depth-10 slice is a
  // single interval shorter than every ladder scale: counts saturate at one
  // cell, the measured slope is near zero, and the criterion cannot fire even
  // though every point carries two preimages
  VerifyOptions opt;
  opt.depth = 10;
  opt.sample_size = 60;
  const auto sys = build_ifs({{0.5, 0.5}, {0.0, 0.0}, {}});
  const auto rep = check_injectivity_criterion(sys, {{"kind", "ifs"}}, opt);
  CHECK(rep.details.at("trigger").at("fired") == false);
  CHECK(rep.verdict == "inconclusive");
  CHECK(rep.details.at("trigger").at("max_slope").get<double>() < 0.1);
}

TEST_CASE("injectivity criterion reports inconclusive when the slope trigger stays quiet") {
  VerifyOptions opt;
  opt.depth = 10;
  opt.sample_size = 60;
  opt.tolerance = 1e-4; // tighter than the overlap family's slope deficit
  const auto rep = check_injectivity_criterion(build_example2({}), {{"kind", "example2"}}, opt);
  CHECK(rep.verdict == "inconclusive");
  CHECK(rep.details.at("trigger").at("fired") == false);
  CHECK(rep.details.contains("not_applicable"));
}

TEST_CASE("locally constant check passes on the no-overlap oracle and demurs on the overlap family") {
  VerifyOptions opt;
  opt.depth = 10;
  opt.sample_size = 60;
  opt.tolerance = 0.03;
  const auto good = check_locally_constant(cantor_ifs(), cantor_desc(), opt);
  CHECK(good.verdict == "pass");
  CHECK(good.details.at("multiplicity_table").size() == 2);

  opt.tolerance = 0.08;
  const auto overlap = check_locally_constant(build_example2({}), {{"kind", "example2"}}, opt);
  CHECK(overlap.verdict == "inconclusive");
}

TEST_CASE("max density check passes on both families") {
  VerifyOptions opt;
  opt.depth = 10;
  opt.sample_size = 100;
  const auto a = check_max_density(cantor_ifs(), cantor_desc(), opt);
  CHECK(a.verdict == "pass");
  const auto b = check_max_density(build_example2({}), {{"kind", "example2"}}, opt);
  CHECK(b.verdict == "pass");
  CHECK(b.details.at("usc_statistic").at("fraction").get<double>() >= 0.9);
}

TEST_CASE("report emission writes evidence files with relative paths") {
  VerifyOptions opt;
  opt.depth = 9;
  opt.sample_size = 40;
  const auto sys = cantor_ifs();
  std::vector<VerificationReport> reps{check_upper_bound(sys, cantor_desc(), opt)};
  const auto dir = std::filesystem::temp_directory_path() / "bowendim_report_test";
  std::filesystem::remove_all(dir);
  const auto files = emit_report(reps, dir.string());
  CHECK(files.size() >= 3); // ladder csv(s), root csv, json, summary
  for (const auto& f : files) {
    CHECK_FALSE(std::filesystem::path(f).is_absolute());
    CHECK(std::filesystem::exists(dir / f));
  }
  REQUIRE_FALSE(reps[0].artifacts.empty());
  const auto j = nlohmann::json::parse(slurp(dir / "report_theorem1.json"));
  CHECK(j.at("claim") == "theorem1");
  CHECK(j.at("verdict") == "pass");
  CHECK(j.at("details").at("dimension_note").get<std::string>().find("box dimension") != std::string::npos);
  const auto summary = slurp(dir / "summary.txt");
  CHECK(summary.find("theorem1: pass") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("report emission is byte-stable across repeated runs") {
  VerifyOptions opt;
  opt.depth = 9;
  opt.sample_size = 40;
  const auto sys = build_example2({});
  const auto dir_a = std::filesystem::temp_directory_path() / "bowendim_det_a";
  const auto dir_b = std::filesystem::temp_directory_path() / "bowendim_det_b";
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
  for (const auto& dir : {dir_a, dir_b}) {
    std::vector<VerificationReport> reps{check_upper_bound(sys, {{"kind", "example2"}}, opt),
                                         check_max_density(sys, {{"kind", "example2"}}, opt)};
    emit_report(reps, dir.string());
  }
  std::size_t compared = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir_a)) {
    const auto name = entry.path().filename();
    CHECK(slurp(entry.path()) == slurp(dir_b / name));
    ++compared;
  }
  CHECK(compared >= 4);
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
}

TEST_CASE("report emission rejects unusable destinations") {
  std::vector<VerificationReport> empty;
  CHECK_THROWS_AS(emit_report(empty, "/tmp/x"), ValidationError);
  VerifyOptions opt;
  opt.depth = 9;
  std::vector<VerificationReport> reps{check_upper_bound(cantor_ifs(), cantor_desc(), opt)};
  const auto blocker = std::filesystem::temp_directory_path() / "bowendim_blocker";
  std::ofstream(blocker) << "occupied";
  CHECK_THROWS_AS(emit_report(reps, (blocker / "sub").string()), ValidationError);
  std::filesystem::remove(blocker);
}
