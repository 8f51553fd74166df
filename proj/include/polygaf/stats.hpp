#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "polygaf/common.hpp"
#include "polygaf/geometry.hpp"
#include "polygaf/sampler.hpp"
#include "polygaf/testform.hpp"

namespace polygaf {

// integral of f against nu over the centered polydisk with the given radii
// (n <= 2), by tensor polar Gauss-Legendre x midpoint rules whose node counts
// double until two successive estimates agree to rtol (plus a tiny absolute
// floor so exactly-zero integrals converge). Throws numerical_error at the cap.
double nu_integrate(const std::function<double(std::span<const Complex>)>& f,
                    std::span<const double> radii, double rtol = 1e-8, int n0_rad = 8,
                    int n0_ang = 16, int max_levels = 8);

// E[I_L(psi)] = (sum_j L_j) * integral of psi d nu.
double expected_statistic(const TestForm& form, const IntensityVector& L);

// Fixed quadrature rule for the Stokes-route statistic: tensor nodes with
// combined weights w(node) * Dphi(node) and the deterministic part of
// log |f-hat|^2 precomputed. One rule serves every trial of an experiment,
// which both amortizes the setup and keeps the estimator's randomness purely
// in the sample.
struct StokesRule {
  std::vector<std::vector<Complex>> coord_nodes;  // per coordinate, flattened polar nodes
  std::vector<double> weight_dphi;                // tensor-ordered w * Dphi
  std::vector<double> log_norm_offset;            // tensor-ordered sum_j L_j log(1-|z_j|^2)
  double expected = 0.0;                          // E[I_L(psi)]
  std::size_t total_nodes() const { return weight_dphi.size(); }
};

StokesRule make_stokes_rule(const TestForm& form, const IntensityVector& L,
                            std::span<const int> n_rad, std::span<const int> n_ang);

// I_L(psi) via Stokes: expected + integral of log-normalized |f|^2 times Dphi.
// The fixed-rule overload is the hot path; the convenience overload doubles
// the rule until the Richardson-corrected step difference drops below rtol.
// The integrand has log singularities at the sample's zeros, so per-sample
// accuracy is algebraic in the node count — rtol here means the wanted
// per-sample accuracy, not machine precision.
double statistic_stokes(const GafSample& s, const StokesRule& rule);
double statistic_stokes(const GafSample& s, const TestForm& form, double rtol = 1e-4);

// Picks the coarsest rule whose Richardson-corrected error estimate on a few
// probe samples (drawn from reserved high trial indices of the same stream)
// is below rtol * (1 + |value|). One calibrated rule then serves every trial
// of an experiment; a fixed rule keeps the Monte Carlo mean unbiased because
// E log |f-hat|^2 is constant and the rule integrates Dphi d nu to ~0.
StokesRule calibrate_stokes_rule(const TestForm& form,
                                 std::shared_ptr<const BasisCoefficientTable> table,
                                 std::uint64_t seed, double rtol = 1e-6, int probes = 3);

// I_L(psi) as a literal sum of psi over the zero set (univariate only).
double statistic_zeros(const GafSample& s, const TestForm& form);

// Leading-order variance zeta(n+2) / prod_j L_j * integral of (Dphi)^2 d nu.
double predicted_variance(const TestForm& form, const IntensityVector& L);

// Exact variance from the bipotential double integral
//   integral integral rho_L(z, w) Dphi(z) Dphi(w) d nu d nu.
// n = 1 reduces to a 3-D integral in (|z|, |w|, relative angle); n = 2 expands
// the dilogarithm into sum_m x^m / m^2, each term factorizing into per-
// coordinate 3-D integrals. Requires separable radial psi.
double bipotential_variance(const TestForm& form, const IntensityVector& L, double rtol = 1e-8);

// zeta(s) by Euler-Maclaurin (absolute accuracy ~1e-14 for s >= 2).
double zeta_constant(int s);

// epsilon(t) = ((1+u) log(1+u) - u) / u with u = t^2/(1-t^2).
double epsilon_mean_value(double t);

// Sub-mean-value inequality for log |f-hat|^2 on E(lambda, radii):
//   lhs = log |f-hat(lambda)|^2,
//   rhs = nu-average of log |f-hat|^2 over E(lambda, radii) + sum_j L_j epsilon(radius_j).
struct MeanValueReport {
  double lhs = 0.0;
  double average = 0.0;  // the nu-average term alone
  double rhs = 0.0;
  bool holds = false;
};
MeanValueReport mean_value_inequality(const GafSample& s, const PolydiskPoint& lambda,
                                      std::span<const double> radii, double tol = 1e-6);
bool mean_value_inequality_check(const GafSample& s, const PolydiskPoint& lambda,
                                 std::span<const double> radii, double tol = 1e-6);

// One-sample Kolmogorov-Smirnov test against the standard normal; values must
// already be centered and scaled. Requires at least 500 values.
struct KsResult {
  double distance = 0.0;
  double p_value = 0.0;
};
KsResult clt_diagnostic(std::span<const double> values);
// Two-sample version (used for distributional-invariance checks).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

double standard_normal_cdf(double x);

namespace detail {

// Same bipotential value through the series route regardless of n (the public
// entry point uses the direct 3-D reduction for n = 1); kept callable so the
// two routes can be cross-checked where both apply.
double bipotential_variance_series(const TestForm& form, const IntensityVector& L, double rtol);

// integral over E(0,R)^2 of (1 - rho(zeta, xi)^2)^{L * power} u(|zeta|) v(|xi|)
// d nu d nu on a fixed (n_rad, n_ang) reduced grid — the building block of the
// series route, exposed for oracle tests against the generic 4-D quadrature.
double radial_pair_integral(double L, double R, const std::function<double(double)>& u,
                            const std::function<double(double)>& v, int power, int n_rad,
                            int n_ang);

}  // namespace detail

// Streaming first/second moments with deterministic pairwise merging.
struct ExperimentResult {
  std::uint64_t trials = 0;
  double mean = 0.0;
  double m2 = 0.0;
  std::map<std::string, double> diagnostics;
  std::string config_echo;

  void add(double x);
  double variance() const;  // unbiased sample variance
  double standard_error() const;
  static ExperimentResult merged(const ExperimentResult& a, const ExperimentResult& b);
};

}  // namespace polygaf
