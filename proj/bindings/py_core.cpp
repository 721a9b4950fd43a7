#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <cmath>
#include <optional>

#include "bowendim/config.hpp"
#include "bowendim/report.hpp"
#include "bowendim/verify.hpp"

namespace py = pybind11;
namespace bd = bowendim;

namespace {

bd::OmegaSpec omega_from_args(double constant, const std::optional<std::vector<double>>& table) {
  if (table.has_value()) return bd::OmegaSpec::per_symbol(*table);
  return bd::OmegaSpec::constant_value(constant);
}

py::dict root_dict(const bd::BowenRoot& r) {
  py::dict d;
  d["t"] = r.t;
  d["residual"] = r.residual;
  d["t_lo"] = r.t_lo;
  d["t_hi"] = r.t_hi;
  d["clamped"] = r.clamped;
  d["method"] = bd::pressure_method_name(r.method);
  d["depth"] = r.depth;
  return d;
}

py::dict estimate_dict(const bd::PressureEstimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["method"] = bd::pressure_method_name(e.method);
  d["depth"] = e.depth;
  d["epsilon"] = e.epsilon;
  d["variation_bound"] = e.variation_bound;
  d["summands"] = e.summands;
  return d;
}

bd::SliceApprox slice_at(const bd::SkewSystem& sys, std::optional<double> anchor, int depth, std::uint64_t seed,
                         bd::SymbolWord* word_out) {
  if (anchor.has_value()) return bd::stable_slice_approx(sys, *anchor, depth, {});
  bd::SplitRng rng(seed, "python", 1);
  bd::SymbolWord w;
  w.symbols.push_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(sys.branch_count()))));
  for (int k = 1; k < depth; ++k) {
    const auto succ = sys.transitions.successors(w.symbols.back());
    w.symbols.push_back(succ[rng.next_below(succ.size())]);
  }
  const double a = bd::cylinder_anchor_orbit(sys, w).front().base;
  if (word_out != nullptr) *word_out = w;
  return bd::stable_slice_approx(sys, a, w, depth, {});
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "pressure, Bowen roots, box dimensions and preimage multiplicities for hyperbolic skew products";
  m.attr("__version__") = bd::kVersion;

  py::register_exception<bd::ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<bd::BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
  py::register_exception<bd::NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<bd::SkewSystem>(m, "SkewSystem")
      .def_readonly("kind", &bd::SkewSystem::kind)
      .def_readonly("fiber_dim", &bd::SkewSystem::fiber_dim)
      .def_property_readonly("branch_count", &bd::SkewSystem::branch_count)
      .def_readonly("sup_contraction", &bd::SkewSystem::sup_contraction)
      .def("__repr__", [](const bd::SkewSystem& s) {
        return "<SkewSystem " + s.kind + " with " + std::to_string(s.branch_count()) + " branches>";
      });

  m.def(
      "make_ifs",
      [](const std::vector<double>& ratios, const std::vector<double>& offsets, const std::vector<int>& flips) {
        return bd::build_ifs({ratios, offsets, flips});
      },
      py::arg("ratios"), py::arg("offsets"), py::arg("flips") = std::vector<int>{},
      "full-shift base with affine fiber maps ratio * y + offset");

  m.def(
      "make_example1",
      [](int m_, double contraction, std::optional<std::vector<std::array<double, 2>>> tau, double coupling) {
        bd::HorseshoeParams p;
        p.m = m_;
        p.contraction = contraction;
        p.tau = tau.has_value() ? *tau : bd::default_translations(m_, contraction);
        return bd::build_example1(p, coupling);
      },
      py::arg("m") = 3, py::arg("contraction") = 1.0 / 3.0, py::arg("tau") = std::nullopt,
      py::arg("coupling") = 0.0, "solenoid-like family with conformal planar contraction");

  m.def(
      "make_example2",
      [](double alpha, double half_width, const std::array<double, 4>& s) {
        bd::Example2Params p;
        p.alpha = alpha;
        p.half_width = half_width;
        p.s = s;
        return bd::build_example2(p);
      },
      py::arg("alpha") = 0.1, py::arg("half_width") = -1.0,
      py::arg("s") = std::array<double, 4>{0.5, 0.5, 0.5, 0.5},
      "four-branch overlap family over two near-points");

  m.def("similarity_dimension", &bd::similarity_dimension, py::arg("ratios"),
        "root of sum ratios^s = 1");

  m.def(
      "pressure",
      [](const bd::SkewSystem& sys, double t, double omega, std::optional<std::vector<double>> omega_table,
         int depth, double epsilon) {
        const bd::OmegaSpec w = omega_from_args(omega, omega_table);
        const bd::PotentialSpec psi = bd::bowen_potential(sys, w, t);
        return estimate_dict(epsilon > 0.0 ? bd::epsilon_pressure(sys, psi, depth, epsilon, {})
                                           : bd::pressure_partition_sum(sys, psi, depth, {}));
      },
      py::arg("system"), py::arg("t") = 0.0, py::arg("omega") = 1.0, py::arg("omega_table") = std::nullopt,
      py::arg("depth") = 10, py::arg("epsilon") = 0.0,
      "partition-sum (or fixed-scale) pressure of t * Phi^s - log omega");

  m.def(
      "bowen_root",
      [](const bd::SkewSystem& sys, double omega, std::optional<std::vector<double>> omega_table, int depth) {
        return root_dict(bd::bowen_root(sys, omega_from_args(omega, omega_table), 1e-9, depth, {}));
      },
      py::arg("system"), py::arg("omega") = 1.0, py::arg("omega_table") = std::nullopt, py::arg("depth") = 10,
      "unique zero of t -> P(t * Phi^s - log omega)");

  m.def(
      "slice_pieces",
      [](const bd::SkewSystem& sys, std::optional<double> anchor, int depth, std::uint64_t seed) {
        const bd::SliceApprox s = slice_at(sys, anchor, depth, seed, nullptr);
        py::list out;
        if (s.dimension == 1) {
          for (const auto& p : s.pieces) out.append(py::make_tuple(p.lo, p.hi));
        } else {
          for (const auto& r : s.rects) out.append(py::make_tuple(r.x.lo, r.x.hi, r.y.lo, r.y.hi));
        }
        return out;
      },
      py::arg("system"), py::arg("anchor") = std::nullopt, py::arg("depth") = 8, py::arg("seed") = 42,
      "depth-n stable slice pieces over an anchor (seeded when omitted)");

  m.def(
      "box_dimension",
      [](const bd::SkewSystem& sys, std::optional<double> anchor, int depth,
         std::optional<std::vector<double>> ladder, std::uint64_t seed) {
        const bd::SliceApprox s = slice_at(sys, anchor, depth, seed, nullptr);
        const std::vector<double> scales = ladder.has_value() ? *ladder : bd::default_ladder(sys, depth);
        const bd::BoxCountLadder fit = bd::box_dimension(sys, s, scales, {});
        py::dict d;
        d["slope"] = fit.slope;
        d["stderr"] = fit.stderr_slope;
        d["intercept"] = fit.intercept;
        py::list entries;
        for (const auto& e : fit.entries) entries.append(py::make_tuple(e.epsilon, e.count));
        d["entries"] = entries;
        d["anchor"] = s.anchor;
        d["pieces"] = s.piece_count();
        return d;
      },
      py::arg("system"), py::arg("anchor") = std::nullopt, py::arg("depth") = 10, py::arg("ladder") = std::nullopt,
      py::arg("seed") = 42, "least-squares box dimension of a stable slice");

  m.def(
      "sample_multiplicities",
      [](const bd::SkewSystem& sys, int count, int depth, std::uint64_t seed) {
        const auto samples = bd::sample_lambda_points(sys, count, depth, depth, seed, {});
        py::list out;
        for (const auto& smp : samples) {
          const auto rep = bd::count_preimages(sys, smp.point, smp.itinerary, depth, -1.0, {});
          py::dict d;
          d["base"] = smp.point.base;
          d["fiber"] = sys.fiber_dim == 1 ? py::object(py::float_(smp.point.fiber1))
                                          : py::object(py::make_tuple(smp.point.fiber1, smp.point.fiber2));
          d["delta"] = rep.count;
          out.append(d);
        }
        return out;
      },
      py::arg("system"), py::arg("count") = 100, py::arg("depth") = 10, py::arg("seed") = 42,
      "fixed-seed invariant-set sample with preimage multiplicities");

  m.def(
      "verify_claim",
      [](const bd::SkewSystem& sys, const std::string& claim, int depth, int sample_size, double tolerance,
         std::uint64_t seed, int minorant_samples) {
        bd::VerifyOptions opt;
        opt.depth = depth;
        opt.sample_size = sample_size;
        opt.tolerance = tolerance;
        opt.seed = seed;
        opt.minorant_samples = minorant_samples;
        nlohmann::json desc = {{"kind", sys.kind}};
        bd::VerificationReport rep;
        if (claim == "theorem1") rep = bd::check_upper_bound(sys, desc, opt);
        else if (claim == "prop_box_constancy") rep = bd::check_box_constancy(sys, desc, opt);
        else if (claim == "cor_inj") rep = bd::check_injectivity_criterion(sys, desc, opt);
        else if (claim == "cor_locconst") rep = bd::check_locally_constant(sys, desc, opt);
        else if (claim == "prop_max_density") rep = bd::check_max_density(sys, desc, opt);
        else throw bd::ValidationError("unknown claim '" + claim + "'");
        const nlohmann::json j = {{"claim", rep.claim}, {"inputs", rep.inputs}, {"lhs", rep.lhs},
                                  {"rhs", rep.rhs},     {"margin", rep.margin}, {"verdict", rep.verdict},
                                  {"details", rep.details}};
        return j.dump();
      },
      py::arg("system"), py::arg("claim"), py::arg("depth") = 10, py::arg("sample_size") = 200,
      py::arg("tolerance") = 0.08, py::arg("seed") = 42, py::arg("minorant_samples") = 0,
      "run one verification claim; returns the report as a JSON string");
}
