#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polygaf/cli.hpp"
#include "polygaf/common.hpp"
#include "polygaf/geometry.hpp"
#include "polygaf/hole.hpp"
#include "polygaf/kernel.hpp"
#include "polygaf/sampler.hpp"
#include "polygaf/stats.hpp"
#include "polygaf/testform.hpp"
#include "polygaf/zeros1d.hpp"

namespace py = pybind11;

namespace {

using polygaf::BasisCoefficientTable;
using polygaf::Complex;
using polygaf::GafSample;
using polygaf::IntensityVector;
using polygaf::PolydiskPoint;
using polygaf::TestForm;

TestForm make_bump(const std::vector<double>& R, const std::string& kind) {
  if (kind == "smooth") return polygaf::smooth_bump(R);
  if (kind == "poly") return polygaf::polynomial_bump(R);
  throw std::invalid_argument("bump must be 'smooth' or 'poly'");
}

GafSample make_sample(const std::vector<double>& L, const std::vector<double>& r, double tol,
                      std::uint64_t seed, std::uint64_t trial) {
  const auto table = BasisCoefficientTable::certified(IntensityVector(L), r, tol);
  return polygaf::draw_sample(table, seed, trial);
}

}  // namespace

PYBIND11_MODULE(_polygaf, m) {
  m.doc() = "Zero statistics of hyperbolic Gaussian analytic functions on the polydisk";

  m.def("version", [] { return std::string(polygaf::kVersionString); });

  m.def(
      "covariance",
      [](const std::vector<Complex>& z, const std::vector<Complex>& w,
         const std::vector<double>& L) {
        return polygaf::covariance(PolydiskPoint(z), PolydiskPoint(w), IntensityVector(L));
      },
      py::arg("z"), py::arg("w"), py::arg("L"),
      "Covariance kernel K_L(z, w) = prod_j (1 - z_j conj(w_j))^(-L_j)");

  m.def(
      "normalized_kernel_abs_sq",
      [](const std::vector<Complex>& z, const std::vector<Complex>& w,
         const std::vector<double>& L) {
        return polygaf::normalized_kernel_abs_sq(PolydiskPoint(z), PolydiskPoint(w),
                                                 IntensityVector(L));
      },
      py::arg("z"), py::arg("w"), py::arg("L"));

  m.def("dilog", &polygaf::dilog, py::arg("x"), "Dilogarithm Li_2 on [0, 1]");
  m.def("zeta", &polygaf::zeta_constant, py::arg("s"));
  m.def("epsilon_mean_value", &polygaf::epsilon_mean_value, py::arg("t"));

  m.def(
      "truncation_degrees",
      [](const std::vector<double>& L, const std::vector<double>& r, double tol) {
        return polygaf::truncation_degree(IntensityVector(L), r, tol).degrees;
      },
      py::arg("L"), py::arg("r"), py::arg("tol") = 1e-12,
      "Certified per-coordinate truncation degrees for the given evaluation radii");

  m.def(
      "evaluate",
      [](const std::vector<double>& L, const std::vector<double>& r, double tol,
         std::uint64_t seed, std::uint64_t trial, const std::vector<Complex>& z) {
        const GafSample s = make_sample(L, r, tol, seed, trial);
        return polygaf::evaluate(s, PolydiskPoint(z));
      },
      py::arg("L"), py::arg("r"), py::arg("tol"), py::arg("seed"), py::arg("trial"),
      py::arg("z"), "Value of the truncated sampled function at a point");

  m.def(
      "sample_zeros",
      [](double L, double r, double tol, std::uint64_t seed, std::uint64_t trial) {
        const GafSample s = make_sample({L}, {r}, tol, seed, trial);
        return polygaf::zeros_in_disk(s, r);
      },
      py::arg("L"), py::arg("r"), py::arg("tol") = 1e-12, py::arg("seed") = 42,
      py::arg("trial") = 0, "Zeros of a univariate draw inside |z| < r, sorted by (re, im)");

  m.def(
      "count_zeros",
      [](double L, double r, double tol, std::uint64_t seed, std::uint64_t trial) {
        const GafSample s = make_sample({L}, {r}, tol, seed, trial);
        return polygaf::count_zeros(s, r);
      },
      py::arg("L"), py::arg("r"), py::arg("tol") = 1e-12, py::arg("seed") = 42,
      py::arg("trial") = 0);

  m.def(
      "statistic_zeros",
      [](double L, const std::vector<double>& R, const std::string& bump, double tol,
         std::uint64_t seed, std::uint64_t trial) {
        const TestForm form = make_bump(R, bump);
        const GafSample s = make_sample({L}, form.support_box, tol, seed, trial);
        return polygaf::statistic_zeros(s, form);
      },
      py::arg("L"), py::arg("R"), py::arg("bump") = "smooth", py::arg("tol") = 1e-12,
      py::arg("seed") = 42, py::arg("trial") = 0,
      "Linear statistic summed over the zero set (univariate)");

  m.def(
      "statistic_stokes",
      [](const std::vector<double>& L, const std::vector<double>& R, const std::string& bump,
         double tol, std::uint64_t seed, std::uint64_t trial, double rtol) {
        const TestForm form = make_bump(R, bump);
        const GafSample s = make_sample(L, form.support_box, tol, seed, trial);
        return polygaf::statistic_stokes(s, form, rtol);
      },
      py::arg("L"), py::arg("R"), py::arg("bump") = "smooth", py::arg("tol") = 1e-12,
      py::arg("seed") = 42, py::arg("trial") = 0, py::arg("rtol") = 1e-8,
      "Linear statistic through the Stokes route (no zero finding)");

  m.def(
      "expected_statistic",
      [](const std::vector<double>& L, const std::vector<double>& R, const std::string& bump) {
        return polygaf::expected_statistic(make_bump(R, bump), IntensityVector(L));
      },
      py::arg("L"), py::arg("R"), py::arg("bump") = "smooth");

  m.def(
      "predicted_variance",
      [](const std::vector<double>& L, const std::vector<double>& R, const std::string& bump) {
        return polygaf::predicted_variance(make_bump(R, bump), IntensityVector(L));
      },
      py::arg("L"), py::arg("R"), py::arg("bump") = "smooth",
      "Leading-order variance zeta(n+2)/prod(L) integral (Dphi)^2 d nu");

  m.def(
      "bipotential_variance",
      [](const std::vector<double>& L, const std::vector<double>& R, const std::string& bump,
         double rtol) {
        return polygaf::bipotential_variance(make_bump(R, bump), IntensityVector(L), rtol);
      },
      py::arg("L"), py::arg("R"), py::arg("bump") = "smooth", py::arg("rtol") = 1e-8,
      "Exact variance from the bipotential double integral");

  m.def(
      "hole_probability",
      [](double L, double r, std::uint64_t trials, std::uint64_t seed, int workers) {
        const polygaf::ProbabilityEstimate est =
            polygaf::hole_probability_mc(L, r, trials, seed, workers);
        py::dict d;
        d["trials"] = est.trials;
        d["valid"] = est.valid;
        d["successes"] = est.successes;
        d["uncertain"] = est.uncertain;
        d["estimate"] = est.estimate;
        d["ci_low"] = est.ci_low;
        d["ci_high"] = est.ci_high;
        return d;
      },
      py::arg("L"), py::arg("r"), py::arg("trials") = 1000, py::arg("seed") = 42,
      py::arg("workers") = 0, "Monte Carlo hole probability with a 95% Wilson interval");

  m.def("run_cli", &polygaf::run_cli, py::arg("args"),
        "Run a full command-line invocation in-process; returns the exit code");
}
