#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "prodlaw/ensembles.hpp"
#include "prodlaw/errors.hpp"
#include "prodlaw/harness.hpp"
#include "prodlaw/io.hpp"
#include "prodlaw/limits.hpp"
#include "prodlaw/potential.hpp"
#include "prodlaw/specfun.hpp"
#include "prodlaw/spectra.hpp"

namespace py = pybind11;
using namespace prodlaw;

namespace {

ExperimentPlan make_plan(const std::string& tag, std::vector<long> n_grid, int m, int trials, double tau,
                         std::uint64_t seed, const std::string& law, const std::string& output,
                         int grid_sample_n) {
  ExperimentPlan p;
  p.tag = parse_theorem_tag(tag);
  p.n_grid = std::move(n_grid);
  p.m = m;
  p.trials = trials;
  p.tau = tau;
  p.seed = seed;
  p.law = parse_entry_law(law);
  p.output = output;
  p.grid_sample_n = grid_sample_n;
  return p;
}

FamilyKind parse_family(const std::string& s) {
  if (s == "centered") return FamilyKind::Centered;
  if (s == "bulk") return FamilyKind::Bulk;
  if (s == "annulus") return FamilyKind::AnnulusAvoiding;
  throw DomainError("unknown ball family: " + s);
}

py::dict stat_dict(const BallDistanceStat& s) {
  py::dict d;
  d["value"] = s.value;
  d["signed_value"] = s.signed_value;
  d["argmax_center"] = s.argmax_center;
  d["argmax_radius"] = s.argmax_radius;
  return d;
}

}  // namespace

PYBIND11_MODULE(_prodlaw, mod) {
  mod.doc() = "Mean and empirical spectral measures of products of random matrices";

  py::register_exception<Error>(mod, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(mod, "DomainError", PyExc_ValueError);
  py::register_exception<PrecisionError>(mod, "PrecisionError", PyExc_ArithmeticError);
  py::register_exception<BackendError>(mod, "BackendError", PyExc_RuntimeError);

  // special functions and the finite-n mean measure
  mod.def("log_gamma", &log_gamma, py::arg("z"));
  mod.def(
      "meijer_g", [](double x, double m) { return meijer_g(x, {m}); }, py::arg("x"), py::arg("m"));
  mod.def(
      "meijer_g_log",
      [](double x, double m) {
        const SignedLog s = meijer_g_log(x, {m});
        return py::make_tuple(s.log_magnitude, s.sign);
      },
      py::arg("x"), py::arg("m"));
  mod.def("eta_k", &eta_k, py::arg("k"), py::arg("n"), py::arg("m"), py::arg("R"));
  mod.def("eta_all", &eta_all, py::arg("n"), py::arg("m"), py::arg("R"));
  mod.def("mean_density", &mean_density, py::arg("abs_z"), py::arg("n"), py::arg("m"));
  mod.def("mean_ball_measure", &mean_ball_measure, py::arg("R"), py::arg("n"), py::arg("m"));
  mod.def("mean_ball_measure_series", &mean_ball_measure_series, py::arg("R"), py::arg("n"), py::arg("m"));
  mod.def(
      "mean_ball_measure_contour", [](double R, int n, double m) { return mean_ball_measure_contour(R, n, m); },
      py::arg("R"), py::arg("n"), py::arg("m"));
  mod.def(
      "mean_distance_sup",
      [](int n, int m, double R_lo, double R_hi) {
        const DistanceSup s = mean_distance_sup(*mean_measure(n, m), R_lo, R_hi);
        return py::make_tuple(s.value, s.R_star, s.signed_diff);
      },
      py::arg("n"), py::arg("m"), py::arg("R_lo"), py::arg("R_hi") = 2.0);
  mod.def("mean_distance_floor", &mean_distance_floor, py::arg("n"), py::arg("m"));

  // limits
  mod.def("limit_density", &limit_density, py::arg("z"), py::arg("m"));
  mod.def("limit_ball_measure", &limit_ball_measure, py::arg("center"), py::arg("R"), py::arg("m"));
  mod.def("annulus_measure", &annulus_measure, py::arg("center"), py::arg("R"), py::arg("width"), py::arg("m"));
  mod.def("log_potential_limit", &log_potential_limit, py::arg("z"));
  mod.def(
      "stieltjes_limit", [](cplx z, cplx w) { return stieltjes_limit(z, w).s; }, py::arg("z"), py::arg("w"));
  mod.def("nu_z_density", &nu_z_density, py::arg("z"), py::arg("x"), py::arg("eps"));

  // ensembles and spectra
  mod.def(
      "sample_factors",
      [](int m, int n, const std::string& law, std::uint64_t seed) {
        return sample_product({m, n, parse_entry_law(law), seed}).factors;
      },
      py::arg("m"), py::arg("n"), py::arg("law") = "complex-gaussian", py::arg("seed") = 0);
  mod.def(
      "sample_product",
      [](int m, int n, const std::string& law, std::uint64_t seed) {
        return sample_product({m, n, parse_entry_law(law), seed}).product;
      },
      py::arg("m"), py::arg("n"), py::arg("law") = "complex-gaussian", py::arg("seed") = 0);
  mod.def(
      "linearization", [](const std::vector<Matrix>& factors) { return linearization_from_factors(factors).W; },
      py::arg("factors"));
  mod.def(
      "eigenvalues", [](const Matrix& a) { return eigenvalues(a).eigenvalues; }, py::arg("a"));
  mod.def("singular_values", &singular_values, py::arg("a"));
  mod.def(
      "radial_ks_distance",
      [](const std::vector<cplx>& ev, double m) { return stat_dict(radial_ks_distance(make_spectrum(ev), m)); },
      py::arg("eigenvalues"), py::arg("m"));
  mod.def(
      "ball_sup_distance",
      [](const std::vector<cplx>& ev, double m, const std::string& family, double tau) {
        return stat_dict(ball_sup_distance(make_spectrum(ev), m, {parse_family(family), tau}));
      },
      py::arg("eigenvalues"), py::arg("m"), py::arg("family") = "centered", py::arg("tau") = 0.0);
  mod.def("bernoulli_count_sample", &bernoulli_count_sample, py::arg("n"), py::arg("m"), py::arg("R"),
          py::arg("trials"), py::arg("seed") = 0);
  mod.def("quarter_circle_cdf", &quarter_circle_cdf, py::arg("x"));

  // potentials and test functions
  mod.def("empirical_potential", &empirical_potential, py::arg("eigenvalues"), py::arg("z"));
  mod.def(
      "mollified_indicator",
      [](cplx center, double radius, double a, bool outer, cplx z) {
        const SmoothValue v = mollified_indicator_eval(
            {center, radius, a, outer ? MollifierSide::Outer : MollifierSide::Inner}, z);
        return py::make_tuple(v.value, v.gradient, v.laplacian);
      },
      py::arg("center"), py::arg("radius"), py::arg("a"), py::arg("outer"), py::arg("z"));

  // harness
  mod.def(
      "fit_rate",
      [](const std::vector<std::pair<double, double>>& pairs) {
        const RateFit f = fit_rate(pairs);
        return py::make_tuple(f.slope, f.intercept, f.residual);
      },
      py::arg("pairs"));
  mod.def(
      "run_plan",
      [](const std::string& tag, std::vector<long> n_grid, int m, int trials, double tau, std::uint64_t seed,
         const std::string& law, const std::string& output, int grid_sample_n) {
        const RateReport r = run_plan(make_plan(tag, std::move(n_grid), m, trials, tau, seed, law, output, grid_sample_n));
        return report_json(r);
      },
      py::arg("tag"), py::arg("n_grid"), py::arg("m") = 1, py::arg("trials") = 1, py::arg("tau") = 0.2,
      py::arg("seed") = 0, py::arg("law") = "complex-gaussian", py::arg("output") = "",
      py::arg("grid_sample_n") = 64, py::call_guard<py::gil_scoped_release>());
  mod.def(
      "read_matrices_binary", [](const std::string& path) { return read_matrices_binary(path); },
      py::arg("path"));
  mod.def(
      "write_matrices_binary",
      [](const std::string& path, const std::vector<Matrix>& mats) { write_matrices_binary(path, mats); },
      py::arg("path"), py::arg("matrices"));
}
