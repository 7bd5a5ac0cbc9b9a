// Python bindings for the main operations: simulation, time change, geometry,
// weight audits, Dirichlet-form classification and asymptotics.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sabrlab/experiments.hpp"
#include "sabrlab/geometry.hpp"
#include "sabrlab/weights.hpp"

namespace py = pybind11;
using namespace sabrlab;

namespace {

py::dict path_to_dict(const Path& path) {
  std::vector<double> t, x, y;
  std::vector<bool> absorbed;
  t.reserve(path.states.size());
  for (std::size_t k = 0; k < path.states.size(); ++k) {
    t.push_back(path.grid.time(static_cast<int>(k)));
    x.push_back(path.states[k].x);
    y.push_back(path.states[k].y);
    absorbed.push_back(path.states[k].absorbed);
  }
  py::dict d;
  d["t"] = t;
  d["x"] = x;
  d["y"] = y;
  d["absorbed"] = absorbed;
  if (path.absorption_time) d["absorption_time"] = *path.absorption_time;
  if (path.truncation_time) d["truncation_time"] = *path.truncation_time;
  return d;
}

}  // namespace

PYBIND11_MODULE(_sabrlab, m) {
  m.doc() = "SABR time-change, weight-function, Dirichlet-form and asymptotics laboratory";

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<double, double, double, double>(), py::arg("beta"), py::arg("rho"),
           py::arg("nu"), py::arg("sigma") = 1.0)
      .def_readonly("beta", &ModelParams::beta)
      .def_readonly("rho", &ModelParams::rho)
      .def_readonly("nu", &ModelParams::nu)
      .def_readonly("sigma", &ModelParams::sigma)
      .def_readonly("rho_bar", &ModelParams::rho_bar)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(beta=" + std::to_string(p.beta) + ", rho=" + std::to_string(p.rho) +
               ", nu=" + std::to_string(p.nu) + ", sigma=" + std::to_string(p.sigma) + ")";
      });

  m.def("cev_exact_stratonovich", &cev_exact_stratonovich, py::arg("x0"), py::arg("beta"),
        py::arg("sigma"), py::arg("w"));

  m.def(
      "simulate_sabr_euler",
      [](const ModelParams& p, double x0, double y0, double horizon, int n_steps, bool drifted,
         std::uint64_t master_seed, std::uint64_t path_index) {
        const TimeGrid grid(0.0, horizon, n_steps);
        return path_to_dict(simulate_sabr_euler(p, {x0, y0, false}, grid, drifted,
                                                SeedSpec{master_seed, path_index}));
      },
      py::arg("params"), py::arg("x0"), py::arg("y0"), py::arg("horizon"), py::arg("n_steps"),
      py::arg("drifted") = false, py::arg("seed") = 1, py::arg("path_index") = 0);

  m.def(
      "simulate_decoupled",
      [](const ModelParams& p, double x0, double y0, double horizon, int n_steps, bool drifted,
         std::uint64_t master_seed, std::uint64_t path_index) {
        const TimeGrid grid(0.0, horizon, n_steps);
        return path_to_dict(simulate_decoupled(p, {x0, y0, false}, grid, drifted,
                                               SeedSpec{master_seed, path_index}));
      },
      py::arg("params"), py::arg("x0"), py::arg("y0"), py::arg("horizon"), py::arg("n_steps"),
      py::arg("drifted") = false, py::arg("seed") = 1, py::arg("path_index") = 0);

  m.def(
      "ks_two_sample",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        const auto r = ks_two_sample(a, b);
        py::dict d;
        d["statistic"] = r.statistic;
        d["p_value"] = r.p_value;
        d["n1"] = r.n1;
        d["n2"] = r.n2;
        return d;
      },
      py::arg("a"), py::arg("b"));

  m.def("legendre_eval", &legendre_eval, py::arg("n"), py::arg("r"));
  m.def(
      "sabr_isometry",
      [](const ModelParams& p, double x, double y) {
        const auto z = sabr_isometry(p, x, y);
        return py::make_tuple(z.u, z.v);
      },
      py::arg("params"), py::arg("x"), py::arg("y"));
  m.def(
      "hyperbolic_cosh_distance",
      [](double U, double V, double u, double v) {
        return hyperbolic_cosh_distance({U, V}, {u, v});
      },
      py::arg("U"), py::arg("V"), py::arg("u"), py::arg("v"));
  m.def(
      "sabr_cosh_distance",
      [](const ModelParams& p, double X, double Y, double x, double y) {
        return sabr_cosh_distance(p, X, Y, x, y);
      },
      py::arg("params"), py::arg("X"), py::arg("Y"), py::arg("x"), py::arg("y"));
  m.def("cev_riemannian_distance", &cev_riemannian_distance, py::arg("beta"), py::arg("sigma"),
        py::arg("a"), py::arg("b"));

  m.def("adhoc_weight", &adhoc_weight, py::arg("beta"), py::arg("x"), py::arg("y"));
  m.def(
      "adhoc_subeigen_gap",
      [](const ModelParams& p, double x, double y) { return adhoc_subeigen_gap(p, x, y); },
      py::arg("params"), py::arg("x"), py::arg("y"));
  m.def(
      "regime_verdict",
      [](double c, int n, const ModelParams& p) {
        const auto v = regime_verdict(c, n, p);
        py::dict d;
        d["admissible"] = v.admissible;
        switch (v.clause) {
          case RegimeClause::C_ge_1: d["clause"] = "c_ge_1"; break;
          case RegimeClause::RhoPositive: d["clause"] = "rho_positive"; break;
          case RegimeClause::C_gt_AbsRho: d["clause"] = "c_gt_abs_rho"; break;
          case RegimeClause::DyadicBetaException: d["clause"] = "dyadic_beta_exception"; break;
          case RegimeClause::Rejected: d["clause"] = "rejected"; break;
        }
        d["note"] = v.note;
        return d;
      },
      py::arg("c"), py::arg("n"), py::arg("params"));

  m.def(
      "classify_symmetrizable",
      [](const ModelParams& p) {
        const auto v = classify_symmetrizable(p);
        py::dict d;
        d["case"] = symmetry_case_name(v.case_);
        d["note"] = v.note;
        if (v.speed) d["speed_density"] = v.speed->label;
        return d;
      },
      py::arg("params"));

  m.def(
      "hamza_closability",
      [](const std::string& family, double beta) {
        HamzaFamily f;
        if (family == "cev") f = HamzaFamily::CevPower;
        else if (family == "ter_elst") f = HamzaFamily::TerElst;
        else if (family == "m0") f = HamzaFamily::M0Slice;
        else if (family == "m1") f = HamzaFamily::M1Slice;
        else throw std::invalid_argument("hamza_closability: unknown family " + family);
        const auto v = hamza_closability(f, beta);
        py::dict d;
        d["closable"] = v.closable;
        d["radon"] = v.radon;
        d["varadhan_valid"] = v.varadhan_valid;
        d["singular_set"] = v.singular_set;
        d["threshold"] = v.parameter_threshold;
        return d;
      },
      py::arg("family"), py::arg("beta"));

  m.def(
      "feller_boundary_class",
      [](double beta) { return boundary_class_name(feller_boundary_class(beta)); },
      py::arg("beta"));
  m.def("cev_entrance_integral", &cev_entrance_integral, py::arg("beta"));

  m.def(
      "mass_at_zero",
      [](const ModelParams& p, double x0, double y0, double T, std::size_t n, double dt,
         std::uint64_t seed) {
        McConfig mc;
        mc.n = n;
        mc.dt = dt;
        mc.master_seed = seed;
        const auto est = mass_at_zero(p, x0, y0, T, mc);
        py::dict d;
        d["p_hat"] = est.p_hat;
        d["n"] = est.n;
        d["ci"] = py::make_tuple(est.ci.lo, est.ci.hi);
        return d;
      },
      py::arg("params"), py::arg("x0"), py::arg("y0"), py::arg("T"), py::arg("n") = 2000,
      py::arg("dt") = 0.01, py::arg("seed") = 1);

  m.def(
      "absorption_probability",
      [](const ModelParams& p, double x0, double y0, bool drifted, std::size_t n, double dt,
         std::uint64_t seed) {
        McConfig mc;
        mc.n = n;
        mc.dt = dt;
        mc.master_seed = seed;
        const auto est = absorption_probability(p, x0, y0, drifted, mc);
        py::dict d;
        d["p_hat"] = est.p_hat;
        d["n"] = est.n;
        d["ci"] = py::make_tuple(est.ci.lo, est.ci.hi);
        d["tail_fraction"] = est.tail_fraction;
        return d;
      },
      py::arg("params"), py::arg("x0"), py::arg("y0"), py::arg("drifted") = false,
      py::arg("n") = 2000, py::arg("dt") = 0.01, py::arg("seed") = 1);
}
