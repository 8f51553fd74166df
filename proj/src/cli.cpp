#include "polygaf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "polygaf/common.hpp"
#include "polygaf/config.hpp"
#include "polygaf/geometry.hpp"
#include "polygaf/hole.hpp"
#include "polygaf/kernel.hpp"
#include "polygaf/report.hpp"
#include "polygaf/rng.hpp"
#include "polygaf/runner.hpp"
#include "polygaf/sampler.hpp"
#include "polygaf/stats.hpp"
#include "polygaf/testform.hpp"
#include "polygaf/zeros1d.hpp"

namespace polygaf {
namespace {

using nlohmann::json;

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

std::string out_path(const Config& c, const std::string& name) {
  std::string dir = c.get_string("out", ".");
  if (dir.empty()) dir = ".";
  if (dir.back() != '/') dir += '/';
  return dir + name;
}

// A scalar entry broadcasts across coordinates; otherwise sizes must match.
std::vector<double> per_coordinate(std::vector<double> values, std::size_t n,
                                   const std::string& key) {
  if (values.size() == 1 && n > 1) return std::vector<double>(n, values[0]);
  require(values.size() == n, "key '" + key + "' needs 1 or " + std::to_string(n) + " entries");
  return values;
}

TestForm bump_from(const Config& c, std::size_t n) {
  const std::vector<double> R = per_coordinate(c.get_double_list("R", {0.5}), n, "R");
  for (double r : R) require(r > 0.0 && r < 1.0, "bump radii must lie in (0,1)");
  const std::string kind = c.get_string("bump", "smooth");
  if (kind == "smooth") return smooth_bump(R);
  if (kind == "poly") return polynomial_bump(R);
  throw std::invalid_argument("bump must be 'smooth' or 'poly'");
}

void add_row(CsvDocument& doc, std::vector<std::string> fields) { doc.row(fields); }

ExperimentResult reduce_in_order(const std::vector<double>& values) {
  ExperimentResult res;
  for (double v : values) res.add(v);
  return res;
}

// ---------------------------------------------------------------------------
// kernel-check: deterministic identity suite for the covariance kernel.
// ---------------------------------------------------------------------------

void run_kernel_check(const Config& c) {
  const int samples = c.get_int("samples", 1000);
  require(samples >= 1, "samples must be positive");
  const std::uint64_t seed = c.get_u64("seed", 42);

  CsvDocument doc(c);
  doc.header(std::vector<std::string>{"check", "n", "samples", "max_error", "tolerance",
                                      "status"});
  bool all_ok = true;
  const auto emit = [&](const std::string& check, const std::string& n, int count,
                        double max_error, double tol) {
    const bool ok = max_error <= tol;
    all_ok = all_ok && ok;
    add_row(doc, {check, n, std::to_string(count), format_double(max_error),
                  format_double(tol), ok ? "pass" : "fail"});
  };

  for (int n = 1; n <= 3; ++n) {
    std::uint64_t idx = 0;
    const auto next_uniform = [&] { return uniform_pair(seed, static_cast<std::uint64_t>(n), idx++); };
    double max_series = 0.0;
    double max_product = 0.0;
    double max_moebius = 0.0;
    for (int s = 0; s < samples; ++s) {
      std::vector<Complex> zc;
      std::vector<Complex> wc;
      std::vector<double> lv;
      for (int j = 0; j < n; ++j) {
        const auto uz = next_uniform();
        const auto uw = next_uniform();
        const auto ul = next_uniform();
        zc.push_back(std::polar(0.9 * std::sqrt(uz[0]), 2.0 * std::numbers::pi * uz[1]));
        wc.push_back(std::polar(0.9 * std::sqrt(uw[0]), 2.0 * std::numbers::pi * uw[1]));
        lv.push_back(0.5 + 9.5 * ul[0]);
      }
      const PolydiskPoint z(zc);
      const PolydiskPoint w(wc);
      const IntensityVector L(lv);

      // Coefficient series against the closed form. The box is sized so the
      // certified diagonal tail is far below the wanted relative accuracy.
      const Complex closed = covariance(z, w, L);
      std::vector<double> diag(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) diag[j] = std::sqrt(std::abs(zc[j]) * std::abs(wc[j]));
      const DegreeBox box = truncation_degree(L, diag, 1e-11 * std::abs(closed));
      const Complex series = covariance_series(z, w, L, box.degrees);
      max_series = std::max(max_series, std::abs(series - closed) / std::abs(closed));

      // |theta|^2 against the product over coordinates of 1 - rho^2, with the
      // pseudo-distance computed through its own quotient formula.
      const double log_lhs = std::log(normalized_kernel_abs_sq(z, w, L));
      double log_product = 0.0;
      double log_recentred = 0.0;
      const MoebiusAutomorphism recentre(w);
      const PolydiskPoint moved = apply_automorphism(recentre, z);
      for (int j = 0; j < n; ++j) {
        const double rho = pseudo_distance(zc[j], wc[j]);
        log_product += lv[j] * std::log1p(-rho * rho);
        log_recentred += lv[j] * std::log1p(-std::norm(moved[j]));
      }
      max_product = std::max(max_product, std::abs(std::expm1(log_lhs - log_product)));
      max_moebius = std::max(max_moebius, std::abs(std::expm1(log_lhs - log_recentred)));
    }
    emit("series_vs_closed_form", std::to_string(n), samples, max_series, 1e-10);
    emit("normalized_kernel_product", std::to_string(n), samples, max_product, 1e-12);
    emit("moebius_invariance", std::to_string(n), samples, max_moebius, 1e-12);
  }

  // x <= Li2(x) <= 2x on a uniform grid of (0,1).
  constexpr int kGrid = 10000;
  double max_gap = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    const double x = (i + 0.5) / kGrid;
    const double li = dilog(x);
    max_gap = std::max({max_gap, x - li, li - 2.0 * x});
  }
  emit("dilog_two_sided_bound", "-", kGrid, max_gap, 1e-11);

  write_file(out_path(c, "kernel_identities.csv"), doc.content());
  if (!all_ok) throw numerical_error("kernel-check: an identity check failed");
}

// ---------------------------------------------------------------------------
// sample: one draw's coefficient table and raw Gaussians, row per multi-index.
// ---------------------------------------------------------------------------

void run_sample(const Config& c) {
  const int n = c.get_int("n", 1);
  require(n >= 1 && n <= 4, "n must be in 1..4");
  const std::size_t dim = static_cast<std::size_t>(n);
  const std::vector<double> lv = per_coordinate(c.get_double_list("L", {1.0}), dim, "L");
  const std::vector<double> radius = per_coordinate(c.get_double_list("r", {0.5}), dim, "r");
  const double tol = c.get_double("tol", 1e-12);
  const std::uint64_t seed = c.get_u64("seed", 42);
  const std::uint64_t trial = c.get_u64("trial", 0);

  const auto table = BasisCoefficientTable::certified(IntensityVector(lv), radius, tol);
  const GafSample s = draw_sample(table, seed, trial);

  CsvDocument doc(c);
  std::vector<std::string> columns;
  for (int j = 0; j < n; ++j) columns.push_back("alpha_" + std::to_string(j + 1));
  for (const char* name : {"log_coeff_sq", "a_re", "a_im", "coeff_re", "coeff_im"})
    columns.push_back(name);
  doc.header(columns);

  const std::vector<int>& degrees = table->box().degrees;
  std::vector<std::size_t> stride(dim, 1);
  for (std::size_t j = dim - 1; j > 0; --j)
    stride[j - 1] = stride[j] * static_cast<std::size_t>(degrees[j] + 1);
  for (std::size_t flat = 0; flat < table->box().flat_size(); ++flat) {
    std::vector<std::string> fields;
    for (std::size_t j = 0; j < dim; ++j) {
      const std::size_t alpha = flat / stride[j] % static_cast<std::size_t>(degrees[j] + 1);
      fields.push_back(std::to_string(alpha));
    }
    fields.push_back(format_double(table->logsq(flat)));
    fields.push_back(format_double(s.a[flat].real()));
    fields.push_back(format_double(s.a[flat].imag()));
    fields.push_back(format_double(s.coeff[flat].real()));
    fields.push_back(format_double(s.coeff[flat].imag()));
    add_row(doc, std::move(fields));
  }
  write_file(out_path(c, "sample_coefficients.csv"), doc.content());

  const Complex at_origin = evaluate(s, PolydiskPoint::origin(dim));
  json j = summary_json(c);
  j["n"] = n;
  j["degrees"] = degrees;
  j["flat_size"] = table->box().flat_size();
  j["tail_variance_bound"] = table->tail_variance_bound();
  j["value_at_origin_re"] = at_origin.real();
  j["value_at_origin_im"] = at_origin.imag();
  write_file(out_path(c, "sample_summary.json"), json_content(j));
}

// ---------------------------------------------------------------------------
// intensity: Monte Carlo mean of the linear statistic against E[I_L(psi)].
// ---------------------------------------------------------------------------

void run_intensity(const Config& c) {
  const int n = c.get_int("n", 1);
  require(n == 1 || n == 2, "intensity: n must be 1 or 2");
  const std::uint64_t trials = c.get_u64("trials", 20000);
  require(trials >= 2, "trials must be at least 2");
  const std::uint64_t seed = c.get_u64("seed", 42);
  const int workers = c.get_int("workers", 0);
  const double tol = c.get_double("tol", 1e-12);

  json j = summary_json(c);
  ExperimentResult res;
  double expected = 0.0;
  if (n == 1) {
    const double L = per_coordinate(c.get_double_list("L", {8.0}), 1, "L")[0];
    const double r = c.get_double("r", 0.5);
    require(r > 0.0 && r < 1.0, "r must lie in (0,1)");
    const auto table =
        BasisCoefficientTable::certified(IntensityVector({L}), std::vector<double>{r}, tol);
    std::vector<double> counts;
    run_indexed<double>(
        trials, workers,
        [&](std::uint64_t t) {
          return static_cast<double>(count_zeros(draw_sample(table, seed, t), r));
        },
        counts);
    res = reduce_in_order(counts);
    expected = L * r * r / (1.0 - r * r);
    j["route"] = "zeros";
  } else {
    const std::vector<double> lv = per_coordinate(c.get_double_list("L", {5.0, 8.0}), 2, "L");
    const IntensityVector L(lv);
    const TestForm form = bump_from(c, 2);
    const auto table = BasisCoefficientTable::certified(L, form.support_box, tol);
    const StokesRule rule =
        calibrate_stokes_rule(form, table, seed, c.get_double("stokes_rtol", 5e-3));
    std::vector<double> values;
    run_indexed<double>(
        trials, workers,
        [&](std::uint64_t t) { return statistic_stokes(draw_sample(table, seed, t), rule); },
        values);
    res = reduce_in_order(values);
    expected = rule.expected;
    j["route"] = "stokes";
    j["quadrature_nodes"] = rule.total_nodes();
  }

  const double se = res.standard_error();
  j["n"] = n;
  j["trials"] = trials;
  j["mean"] = res.mean;
  j["standard_error"] = se;
  j["sample_variance"] = res.variance();
  j["expected"] = expected;
  j["z_score"] = se > 0.0 ? (res.mean - expected) / se : 0.0;
  j["within_three_se"] = std::abs(res.mean - expected) <= 3.0 * se;
  write_file(out_path(c, "intensity_report.json"), json_content(j));
}

// ---------------------------------------------------------------------------
// variance: MC variance vs bipotential double integral vs leading-order law.
// ---------------------------------------------------------------------------

void run_variance(const Config& c) {
  const int n = c.get_int("n", 1);
  require(n == 1 || n == 2, "variance: n must be 1 or 2");
  const std::size_t dim = static_cast<std::size_t>(n);
  const std::vector<double> lv = per_coordinate(c.get_double_list("L", {20.0}), dim, "L");
  const IntensityVector L(lv);
  const std::uint64_t trials = c.get_u64("trials", 100000);
  require(trials >= 2, "trials must be at least 2");
  const std::uint64_t seed = c.get_u64("seed", 42);
  const int workers = c.get_int("workers", 0);

  const TestForm form = bump_from(c, dim);
  const auto table =
      BasisCoefficientTable::certified(L, form.support_box, c.get_double("tol", 1e-12));
  const StokesRule rule =
      calibrate_stokes_rule(form, table, seed, c.get_double("stokes_rtol", 2e-4));
  std::vector<double> values;
  run_indexed<double>(
      trials, workers,
      [&](std::uint64_t t) { return statistic_stokes(draw_sample(table, seed, t), rule); },
      values);
  const ExperimentResult res = reduce_in_order(values);

  const double quad_rtol = c.get_double("quad_rtol", 1e-6);
  const double bipotential = bipotential_variance(form, L, quad_rtol);
  const double predicted = predicted_variance(form, L);

  json j = summary_json(c);
  j["n"] = n;
  j["trials"] = trials;
  j["quadrature_nodes"] = rule.total_nodes();
  j["expected_mean"] = rule.expected;
  j["mc_mean"] = res.mean;
  j["mc_variance"] = res.variance();
  j["mc_variance_rel_se"] = std::sqrt(2.0 / static_cast<double>(trials - 1));
  j["bipotential_variance"] = bipotential;
  j["predicted_variance"] = predicted;
  j["ratio_mc_bipotential"] = res.variance() / bipotential;
  j["ratio_bipotential_predicted"] = bipotential / predicted;
  write_file(out_path(c, "variance_report.json"), json_content(j));
}

// ---------------------------------------------------------------------------
// clt: normalized linear statistics against the standard normal (univariate).
// ---------------------------------------------------------------------------

void run_clt(const Config& c) {
  const double L_value = per_coordinate(c.get_double_list("L", {100.0}), 1, "L")[0];
  const IntensityVector L({L_value});
  const std::uint64_t trials = c.get_u64("trials", 2000);
  const std::uint64_t seed = c.get_u64("seed", 42);
  const int workers = c.get_int("workers", 0);

  const TestForm form = bump_from(c, 1);
  const auto table =
      BasisCoefficientTable::certified(L, form.support_box, c.get_double("tol", 1e-12));
  const StokesRule rule =
      calibrate_stokes_rule(form, table, seed, c.get_double("stokes_rtol", 2e-4));
  std::vector<double> values;
  run_indexed<double>(
      trials, workers,
      [&](std::uint64_t t) { return statistic_stokes(draw_sample(table, seed, t), rule); },
      values);

  const double bipotential = bipotential_variance(form, L, c.get_double("quad_rtol", 1e-6));
  require(bipotential > 0.0, "bipotential variance must be positive");
  const double sigma = std::sqrt(bipotential);
  std::vector<double> normalized(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    normalized[i] = (values[i] - rule.expected) / sigma;
  const KsResult ks = clt_diagnostic(normalized);

  CsvDocument doc(c);
  doc.header(std::vector<std::string>{"trial", "statistic", "normalized"});
  for (std::size_t i = 0; i < values.size(); ++i)
    add_row(doc, {std::to_string(i), format_double(values[i]), format_double(normalized[i])});
  write_file(out_path(c, "clt_values.csv"), doc.content());

  const ExperimentResult res = reduce_in_order(values);
  json j = summary_json(c);
  j["trials"] = trials;
  j["expected_mean"] = rule.expected;
  j["sample_mean"] = res.mean;
  j["sample_variance"] = res.variance();
  j["bipotential_variance"] = bipotential;
  j["ks_distance"] = ks.distance;
  j["ks_p_value"] = ks.p_value;
  write_file(out_path(c, "clt_report.json"), json_content(j));
}

// ---------------------------------------------------------------------------
// deviation: P[|count/L - nu(E)| > delta] across intensities (univariate).
// ---------------------------------------------------------------------------

void run_deviation(const Config& c) {
  const std::vector<double> points = c.get_double_list("L", {2.0, 4.0, 8.0});
  require(!points.empty(), "L must list at least one intensity");
  const double r = c.get_double("r", 0.5);
  require(r > 0.0 && r < 1.0, "r must lie in (0,1)");
  const double delta = c.get_double("delta", 0.5);
  require(delta > 0.0, "delta must be positive");
  const std::uint64_t trials = c.get_u64("trials", 100000);
  const std::uint64_t seed = c.get_u64("seed", 42);
  const int workers = c.get_int("workers", 0);
  const double tail_tol = c.get_double("tol", 1e-12);

  CsvDocument doc(c);
  doc.header(std::vector<std::string>{"L", "trials", "valid", "uncertain", "successes",
                                      "probability", "ci_low", "ci_high", "log_probability"});
  std::vector<ProbabilityEstimate> estimates;
  std::vector<DecayFitInput> fit_points;
  for (double L : points) {
    const ProbabilityEstimate est =
        deviation_probability_mc(L, r, delta, trials, seed, workers, tail_tol);
    estimates.push_back(est);
    const double log_p = est.estimate > 0.0 ? std::log(est.estimate) : 0.0;
    add_row(doc, {format_double(L), std::to_string(est.trials), std::to_string(est.valid),
                  std::to_string(est.uncertain), std::to_string(est.successes),
                  format_double(est.estimate), format_double(est.ci_low),
                  format_double(est.ci_high),
                  est.estimate > 0.0 ? format_double(log_p) : std::string("-inf")});
    if (est.estimate > 0.0 && est.estimate < 1.0) fit_points.push_back({L, log_p});
  }
  write_file(out_path(c, "deviation_decay.csv"), doc.content());

  bool decreasing = true;
  for (std::size_t i = 1; i < estimates.size(); ++i)
    decreasing = decreasing && estimates[i].estimate < estimates[i - 1].estimate;
  json j = summary_json(c);
  j["probabilities"] = json::array();
  for (const auto& est : estimates) j["probabilities"].push_back(est.estimate);
  j["strictly_decreasing"] = decreasing;
  j["ci_separated_first_last"] =
      estimates.size() >= 2 && estimates.back().ci_high < estimates.front().ci_low;
  if (fit_points.size() >= 3) {
    const DecayFit fit = decay_fit(fit_points);
    j["fit_beta"] = fit.beta;
    j["fit_c"] = fit.c;
    j["fit_residuals"] = fit.residuals;
  } else {
    j["fit_beta"] = nullptr;
    j["fit_c"] = nullptr;
  }
  write_file(out_path(c, "deviation_summary.json"), json_content(j));

  if (c.get_int("plot", 0) != 0) {
    std::string gp;
    gp += "set datafile separator \",\"\n";
    gp += "set key autotitle columnhead\n";
    gp += "set xlabel \"L\"\n";
    gp += "set ylabel \"-log P\"\n";
    gp += "set logscale xy\n";
    gp += "plot \"deviation_decay.csv\" using 1:(-column(9)) with linespoints pt 7\n";
    write_file(out_path(c, "deviation_decay.gp"), gp);
  }
}

// ---------------------------------------------------------------------------
// hole: P[no zeros in E(0,r)] decay and its power-law fit.
// ---------------------------------------------------------------------------

void run_hole(const Config& c) {
  const int n = c.get_int("n", 1);
  require(n == 1 || n == 2, "hole: n must be 1 or 2");
  const std::size_t dim = static_cast<std::size_t>(n);
  const std::vector<double> flat = c.get_double_list("L", {1.0, 2.0, 3.0, 4.0});
  require(!flat.empty(), "L must list at least one intensity");
  require(flat.size() % dim == 0,
          "L must list groups of " + std::to_string(n) + " entries for n = " + std::to_string(n));
  const std::vector<double> radii = per_coordinate(c.get_double_list("r", {0.5}), dim, "r");
  for (double r : radii) require(r > 0.0 && r < 1.0, "r must lie in (0,1)");
  const std::uint64_t trials = c.get_u64("trials", 1000000);
  const std::uint64_t seed = c.get_u64("seed", 42);
  const int workers = c.get_int("workers", 0);
  const double tail_tol = c.get_double("tol", 1e-24);
  const double kappa = c.get_double("kappa", 10.0);
  const int density = c.get_int("density", 16);

  CsvDocument doc(c);
  doc.header(std::vector<std::string>{"method", "scale", "L", "trials", "valid", "uncertain",
                                      "successes", "probability", "ci_low", "ci_high",
                                      "log_probability"});
  std::vector<double> log_ps;
  std::vector<double> uncertain_fraction;
  std::vector<DecayFitInput> fit_points;
  const std::size_t groups = flat.size() / dim;
  for (std::size_t g = 0; g < groups; ++g) {
    std::vector<double> lv(flat.begin() + static_cast<std::ptrdiff_t>(g * dim),
                           flat.begin() + static_cast<std::ptrdiff_t>((g + 1) * dim));
    const IntensityVector L(lv);
    ProbabilityEstimate est;
    std::string method;
    if (n == 1) {
      est = hole_probability_mc(lv[0], radii[0], trials, seed, workers, tail_tol, kappa);
      method = "argument_principle";
    } else {
      est = hole_probability_grid(L, radii, trials, seed, density, workers, tail_tol);
      method = "grid_heuristic";
    }
    const double scale = L.sum() * L.product();
    const double log_p = est.estimate > 0.0 ? std::log(est.estimate) : 0.0;
    std::string joined;
    for (std::size_t j = 0; j < lv.size(); ++j)
      joined += (j ? "," : "") + format_double(lv[j]);
    add_row(doc, {method, format_double(scale), joined, std::to_string(est.trials),
                  std::to_string(est.valid), std::to_string(est.uncertain),
                  std::to_string(est.successes), format_double(est.estimate),
                  format_double(est.ci_low), format_double(est.ci_high),
                  est.estimate > 0.0 ? format_double(log_p) : std::string("-inf")});
    log_ps.push_back(est.estimate > 0.0 ? log_p
                                        : -std::numeric_limits<double>::infinity());
    uncertain_fraction.push_back(est.trials > 0 ? static_cast<double>(est.uncertain) /
                                                      static_cast<double>(est.trials)
                                                : 0.0);
    if (est.estimate > 0.0 && est.estimate < 1.0) fit_points.push_back({scale, log_p});
  }
  write_file(out_path(c, "hole_decay.csv"), doc.content());

  bool decreasing = true;
  for (std::size_t i = 1; i < log_ps.size(); ++i)
    decreasing = decreasing && log_ps[i] < log_ps[i - 1];
  json j = summary_json(c);
  j["log_probabilities"] = log_ps;
  j["strictly_decreasing_log_p"] = decreasing;
  j["max_uncertain_fraction"] =
      uncertain_fraction.empty()
          ? 0.0
          : *std::max_element(uncertain_fraction.begin(), uncertain_fraction.end());
  j["method"] = n == 1 ? "argument_principle" : "grid_heuristic";
  if (fit_points.size() >= 3) {
    const DecayFit fit = decay_fit(fit_points);
    j["fit_beta"] = fit.beta;
    j["fit_c"] = fit.c;
    j["fit_residuals"] = fit.residuals;
  } else {
    j["fit_beta"] = nullptr;
    j["fit_c"] = nullptr;
  }
  write_file(out_path(c, "hole_fit.json"), json_content(j));

  if (c.get_int("plot", 0) != 0) {
    std::string gp;
    gp += "set datafile separator \",\"\n";
    gp += "set key autotitle columnhead\n";
    gp += "set xlabel \"scale\"\n";
    gp += "set ylabel \"-log P(hole)\"\n";
    gp += "set logscale xy\n";
    gp += "plot \"hole_decay.csv\" using 2:(-column(11)) with linespoints pt 7\n";
    write_file(out_path(c, "hole_decay.gp"), gp);
  }
}

// ---------------------------------------------------------------------------
// mean-value: sub-mean-value inequality on sampled GAFs + the epsilon bound.
// ---------------------------------------------------------------------------

struct MeanValueOutcome {
  double margin = 0.0;
  bool holds = false;
  bool finite = false;
};

void run_mean_value(const Config& c) {
  const int n = c.get_int("n", 1);
  require(n == 1 || n == 2, "mean-value: n must be 1 or 2");
  const std::size_t dim = static_cast<std::size_t>(n);
  const std::vector<double> lv = per_coordinate(c.get_double_list("L", {5.0}), dim, "L");
  const IntensityVector L(lv);
  const std::vector<double> radii = per_coordinate(c.get_double_list("s", {0.4}), dim, "s");
  for (double s : radii) require(s > 0.0 && s < 1.0, "s must lie in (0,1)");
  std::vector<double> lambda_flat = c.get_double_list("lambda", std::vector<double>(2 * dim, 0.0));
  require(lambda_flat.size() == 2 * dim, "lambda needs re,im pairs per coordinate");
  std::vector<Complex> centre(dim);
  for (std::size_t j = 0; j < dim; ++j)
    centre[j] = Complex(lambda_flat[2 * j], lambda_flat[2 * j + 1]);
  const PolydiskPoint lambda(centre);

  const std::uint64_t trials = c.get_u64("trials", 1000);
  require(trials >= 1, "trials must be positive");
  const std::uint64_t seed = c.get_u64("seed", 42);
  const int workers = c.get_int("workers", 0);
  const double tol = c.get_double("tol", 1e-6);

  std::vector<double> eval_radius(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const double a = std::abs(centre[j]);
    require(a < 1.0, "lambda must lie in the open polydisk");
    const double reach = (a + radii[j]) / (1.0 + a * radii[j]);
    eval_radius[j] = std::min(reach + 1e-6, kCoordModulusCap);
  }
  const auto table =
      BasisCoefficientTable::certified(L, eval_radius, c.get_double("trunc_tol", 1e-12));

  std::vector<MeanValueOutcome> outcomes;
  run_indexed<MeanValueOutcome>(
      trials, workers,
      [&](std::uint64_t t) {
        const GafSample s = draw_sample(table, seed, t);
        const MeanValueReport rep = mean_value_inequality(s, lambda, radii, tol);
        MeanValueOutcome out;
        out.holds = rep.holds;
        out.finite = std::isfinite(rep.lhs);
        out.margin = out.finite ? rep.rhs - rep.lhs : 0.0;
        return out;
      },
      outcomes);

  std::uint64_t violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (const auto& out : outcomes) {
    if (!out.holds) ++violations;
    if (out.finite) min_margin = std::min(min_margin, out.margin);
  }

  // epsilon(t) <= t^2 / (1 - t^2) across the whole range of radii.
  double max_gap = 0.0;
  for (int i = 1; i < 1000; ++i) {
    const double t = i / 1000.0;
    const double u = t * t / (1.0 - t * t);
    max_gap = std::max(max_gap, epsilon_mean_value(t) - u);
  }

  json j = summary_json(c);
  j["n"] = n;
  j["trials"] = trials;
  j["violations"] = violations;
  j["all_hold"] = violations == 0;
  j["min_margin"] = std::isfinite(min_margin) ? json(min_margin) : json(nullptr);
  j["epsilon_bound_max_gap"] = max_gap;
  j["epsilon_bound_ok"] = max_gap <= 1e-12;
  write_file(out_path(c, "mean_value_report.json"), json_content(j));
  if (violations > 0) throw numerical_error("mean-value: inequality violated on sampled trials");
}

// ---------------------------------------------------------------------------
// Subcommand registry: defaults double as the flag set and the config schema.
// ---------------------------------------------------------------------------

struct SubSpec {
  CLI::App* app = nullptr;
  std::string config_path;
  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flag_options;
  std::vector<std::pair<std::string, std::string>> defaults;
  std::function<void(const Config&)> run;
};

Config resolve_config(const SubSpec& spec) {
  Config cfg;
  for (const auto& [key, value] : spec.defaults) cfg.set(key, value);
  const auto known = [&](const std::string& key) {
    for (const auto& [k, v] : spec.defaults)
      if (k == key) return true;
    return false;
  };
  if (!spec.config_path.empty()) {
    const Config file = Config::from_file(spec.config_path);
    for (const auto& [key, value] : file.entries()) {
      if (!known(key)) throw std::invalid_argument("unknown config key: " + key);
      cfg.set(key, value);
    }
  }
  for (const auto& [key, option] : spec.flag_options)
    if (option->count() > 0) cfg.set(key, spec.flag_values.at(key));
  return cfg;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Zero statistics of hyperbolic Gaussian analytic functions on the polydisk"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersionString));

  std::vector<std::unique_ptr<SubSpec>> specs;
  const auto add_subcommand = [&](const std::string& name, const std::string& description,
                                  std::vector<std::pair<std::string, std::string>> defaults,
                                  std::function<void(const Config&)> fn) {
    auto spec = std::make_unique<SubSpec>();
    spec->app = app.add_subcommand(name, description);
    spec->defaults = std::move(defaults);
    spec->run = std::move(fn);
    spec->app->add_option("--config", spec->config_path,
                          "key = value file merged over built-in defaults");
    for (const auto& [key, value] : spec->defaults) {
      std::string& slot = spec->flag_values[key];
      spec->flag_options[key] =
          spec->app->add_option("--" + key, slot, "config key (default: " + value + ")");
    }
    specs.push_back(std::move(spec));
  };

  add_subcommand("kernel-check", "deterministic covariance kernel identity suite",
                 {{"samples", "1000"}, {"seed", "42"}, {"out", "."}}, run_kernel_check);
  add_subcommand("sample", "write one draw's coefficients and certified truncation data",
                 {{"n", "1"},
                  {"L", "1"},
                  {"r", "0.5"},
                  {"tol", "1e-12"},
                  {"seed", "42"},
                  {"trial", "0"},
                  {"out", "."}},
                 run_sample);
  add_subcommand("intensity", "Monte Carlo mean of the zero statistic vs its expectation",
                 {{"n", "1"},
                  {"L", "8"},
                  {"r", "0.5"},
                  {"R", "0.5"},
                  {"bump", "smooth"},
                  {"trials", "20000"},
                  {"tol", "1e-12"},
                  {"stokes_rtol", "0.005"},
                  {"seed", "42"},
                  {"workers", "0"},
                  {"out", "."}},
                 run_intensity);
  add_subcommand("variance", "MC variance vs bipotential integral vs asymptotic law",
                 {{"n", "1"},
                  {"L", "20"},
                  {"R", "0.5"},
                  {"bump", "smooth"},
                  {"trials", "100000"},
                  {"tol", "1e-12"},
                  {"stokes_rtol", "0.0002"},
                  {"quad_rtol", "1e-06"},
                  {"seed", "42"},
                  {"workers", "0"},
                  {"out", "."}},
                 run_variance);
  add_subcommand("clt", "normalized linear statistics against the standard normal",
                 {{"L", "100"},
                  {"R", "0.5"},
                  {"bump", "smooth"},
                  {"trials", "2000"},
                  {"tol", "1e-12"},
                  {"stokes_rtol", "0.0002"},
                  {"quad_rtol", "1e-06"},
                  {"seed", "42"},
                  {"workers", "0"},
                  {"out", "."}},
                 run_clt);
  add_subcommand("deviation", "large-deviation probability of the normalized zero count",
                 {{"L", "2,4,8"},
                  {"r", "0.5"},
                  {"delta", "0.5"},
                  {"trials", "100000"},
                  {"tol", "1e-12"},
                  {"seed", "42"},
                  {"workers", "0"},
                  {"plot", "0"},
                  {"out", "."}},
                 run_deviation);
  add_subcommand("hole", "hole probability decay across intensities with power-law fit",
                 {{"n", "1"},
                  {"L", "1,2,3,4"},
                  {"r", "0.5"},
                  {"trials", "1000000"},
                  {"tol", "1e-24"},
                  {"kappa", "10"},
                  {"density", "16"},
                  {"seed", "42"},
                  {"workers", "0"},
                  {"plot", "0"},
                  {"out", "."}},
                 run_hole);
  add_subcommand("mean-value", "sub-mean-value inequality on sampled functions",
                 {{"n", "1"},
                  {"L", "5"},
                  {"s", "0.4"},
                  {"lambda", "0,0"},
                  {"trials", "1000"},
                  {"tol", "1e-06"},
                  {"trunc_tol", "1e-12"},
                  {"seed", "42"},
                  {"workers", "0"},
                  {"out", "."}},
                 run_mean_value);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("polygaf");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    for (const auto& spec : specs)
      if (spec->app->parsed()) spec->run(resolve_config(*spec));
    return 0;
  } catch (const numerical_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

}  // namespace polygaf
