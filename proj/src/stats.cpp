#include "polygaf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "polygaf/quadrature.hpp"
#include "polygaf/zeros1d.hpp"

namespace polygaf {

namespace {

// 2 integral_0^R h(r) r / (1-r^2)^2 dr — one coordinate's nu-integral of a
// radial function.
double radial_nu_integral(const std::function<double(double)>& h, double R, double rtol) {
  return adaptive_gl(
      [&h](double r) {
        const double one_minus = 1.0 - r * r;
        return h(r) * 2.0 * r / (one_minus * one_minus);
      },
      0.0, R, rtol);
}

}  // namespace

double nu_integrate(const std::function<double(std::span<const Complex>)>& f,
                    std::span<const double> radii, double rtol, int n0_rad, int n0_ang,
                    int max_levels) {
  const std::size_t n = radii.size();
  if (n < 1 || n > 2) throw std::invalid_argument("nu_integrate: supports n = 1 or 2");
  double prev = 0.0;
  bool have_prev = false;
  for (int level = 0; level < max_levels; ++level) {
    const int nr = n0_rad << level;
    const int na = n0_ang << level;
    double acc = 0.0;
    if (n == 1) {
      const CoordinateRule rule = coordinate_polar_rule(radii[0], nr, na);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const Complex z[1] = {rule.nodes[i]};
        acc += rule.weights[i] * f(std::span<const Complex>(z, 1));
      }
    } else {
      const CoordinateRule r1 = coordinate_polar_rule(radii[0], nr, na);
      const CoordinateRule r2 = coordinate_polar_rule(radii[1], nr, na);
      for (std::size_t i = 0; i < r1.nodes.size(); ++i) {
        double inner = 0.0;
        for (std::size_t k = 0; k < r2.nodes.size(); ++k) {
          const Complex z[2] = {r1.nodes[i], r2.nodes[k]};
          inner += r2.weights[k] * f(std::span<const Complex>(z, 2));
        }
        acc += r1.weights[i] * inner;
      }
    }
    if (have_prev && std::abs(acc - prev) <= rtol * std::abs(acc) + 1e-14) return acc;
    prev = acc;
    have_prev = true;
  }
  throw numerical_error("nu_integrate: quadrature did not converge");
}

double expected_statistic(const TestForm& form, const IntensityVector& L) {
  if (L.dim() != form.n) throw std::invalid_argument("expected_statistic: dimension mismatch");
  double integral;
  if (form.separable_radial()) {
    integral = 1.0;
    for (std::size_t j = 0; j < form.n; ++j) {
      const auto& g = form.radial[j].g;
      integral *= radial_nu_integral([&g](double r) { return g(r * r); },
                                     form.radial[j].support_radius, 1e-10);
    }
  } else {
    integral = nu_integrate([&form](std::span<const Complex> z) { return form.psi(z); },
                            form.support_box, 1e-8);
  }
  return L.sum() * integral;
}

StokesRule make_stokes_rule(const TestForm& form, const IntensityVector& L,
                            std::span<const int> n_rad, std::span<const int> n_ang) {
  const std::size_t n = form.n;
  if (L.dim() != n || n_rad.size() != n || n_ang.size() != n)
    throw std::invalid_argument("make_stokes_rule: dimension mismatch");
  if (n < 1 || n > 2) throw std::invalid_argument("make_stokes_rule: supports n = 1 or 2");
  std::vector<CoordinateRule> coords;
  coords.reserve(n);
  for (std::size_t j = 0; j < n; ++j)
    coords.push_back(coordinate_polar_rule(form.support_box[j], n_rad[j], n_ang[j]));
  StokesRule rule;
  for (auto& c : coords) rule.coord_nodes.push_back(c.nodes);
  if (n == 1) {
    const std::size_t g = coords[0].nodes.size();
    rule.weight_dphi.resize(g);
    rule.log_norm_offset.resize(g);
    for (std::size_t i = 0; i < g; ++i) {
      const Complex z[1] = {coords[0].nodes[i]};
      rule.weight_dphi[i] = coords[0].weights[i] * dphi(form, std::span<const Complex>(z, 1));
      rule.log_norm_offset[i] = L[0] * std::log1p(-std::norm(z[0]));
    }
  } else {
    const std::size_t g1 = coords[0].nodes.size();
    const std::size_t g2 = coords[1].nodes.size();
    rule.weight_dphi.resize(g1 * g2);
    rule.log_norm_offset.resize(g1 * g2);
    for (std::size_t i1 = 0; i1 < g1; ++i1) {
      const double lg1 = L[0] * std::log1p(-std::norm(coords[0].nodes[i1]));
      for (std::size_t i2 = 0; i2 < g2; ++i2) {
        const Complex z[2] = {coords[0].nodes[i1], coords[1].nodes[i2]};
        const std::size_t flat = i1 * g2 + i2;
        rule.weight_dphi[flat] =
            coords[0].weights[i1] * coords[1].weights[i2] * dphi(form, std::span<const Complex>(z, 2));
        rule.log_norm_offset[flat] = lg1 + L[1] * std::log1p(-std::norm(z[1]));
      }
    }
  }
  // The exact weights satisfy integral of Dphi d nu = 0 (psi has compact
  // support), and E log |f-hat|^2 is the same constant at every point, so any
  // discrete defect in that zero leaks straight into the estimator's mean.
  // Project the defect out by centering the combined weights; the perturbation
  // is the same order as the rule's intrinsic quadrature error.
  double defect = 0.0;
  for (const double wd : rule.weight_dphi) defect += wd;
  const double shift = defect / static_cast<double>(rule.weight_dphi.size());
  for (double& wd : rule.weight_dphi) wd -= shift;
  rule.expected = expected_statistic(form, L);
  return rule;
}

double statistic_stokes(const GafSample& s, const StokesRule& rule) {
  const std::size_t n = rule.coord_nodes.size();
  if (s.dim() != n) throw std::invalid_argument("statistic_stokes: dimension mismatch");
  std::vector<Complex> values(rule.total_nodes());
  if (n == 1) {
    evaluate_nodes(s, rule.coord_nodes[0], values);
  } else {
    evaluate_grid2(s, rule.coord_nodes[0], rule.coord_nodes[1], values);
  }
  const std::size_t g2 = n == 2 ? rule.coord_nodes[1].size() : 1;
  double acc = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    double nsq = std::norm(values[k]);
    if (nsq == 0.0 || !std::isfinite(nsq)) {
      // A node fell on (or defeated) a zero of f; nudge it inward and retry.
      std::vector<Complex> z;
      if (n == 1) {
        z = {rule.coord_nodes[0][k]};
      } else {
        z = {rule.coord_nodes[0][k / g2], rule.coord_nodes[1][k % g2]};
      }
      for (int attempt = 1; attempt <= 4 && (nsq == 0.0 || !std::isfinite(nsq)); ++attempt) {
        std::vector<Complex> jittered = z;
        for (Complex& c : jittered) c *= 1.0 - attempt * 1e-9;
        nsq = std::norm(evaluate(s, jittered));
      }
      if (nsq == 0.0 || !std::isfinite(nsq))
        throw numerical_error("statistic_stokes: node stuck on a zero of f");
    }
    acc += rule.weight_dphi[k] * (std::log(nsq) + rule.log_norm_offset[k]);
  }
  return rule.expected + acc;
}

double statistic_stokes(const GafSample& s, const TestForm& form, double rtol) {
  const std::size_t n = form.n;
  if (n < 1 || n > 2) throw std::invalid_argument("statistic_stokes: supports n = 1 or 2");
  const int nr = n == 1 ? 16 : 12;
  const int na = 2 * nr;
  const int max_level = n == 1 ? 7 : 3;
  double prev = 0.0;
  bool have_prev = false;
  int agreements = 0;
  for (int level = 0; level < max_level; ++level) {
    std::vector<int> n_rad(n, nr << level);
    std::vector<int> n_ang(n, na << level);
    const StokesRule rule = make_stokes_rule(form, s.L(), n_rad, n_ang);
    const double cur = statistic_stokes(s, rule);
    // The halved-spacing error ratio is ~1/4, so the last doubling step's
    // difference overstates the fine value's error by about 3x.  Require two
    // consecutive agreements so one accidentally small difference (a sign
    // change in the error as a zero crosses the rule) cannot end the refinement
    // while the true error is still large.
    if (have_prev && std::abs(cur - prev) / 3.0 <= rtol * (1.0 + std::abs(cur))) {
      if (++agreements >= 2) return cur;
    } else {
      agreements = 0;
    }
    prev = cur;
    have_prev = true;
  }
  if (agreements >= 1) return prev;
  throw numerical_error("statistic_stokes: quadrature did not converge");
}

StokesRule calibrate_stokes_rule(const TestForm& form,
                                 std::shared_ptr<const BasisCoefficientTable> table,
                                 std::uint64_t seed, double rtol, int probes) {
  if (!table) throw std::invalid_argument("calibrate_stokes_rule: null coefficient table");
  const std::size_t n = form.n;
  if (n < 1 || n > 2) throw std::invalid_argument("calibrate_stokes_rule: supports n = 1 or 2");
  if (probes < 1) throw std::invalid_argument("calibrate_stokes_rule: probes must be positive");
  // Probe trials live far above any experiment's trial range so calibration
  // never reuses (and never perturbs) the per-trial coefficient streams.
  constexpr std::uint64_t kProbeBase = std::uint64_t{1} << 40;
  std::vector<GafSample> samples;
  samples.reserve(static_cast<std::size_t>(probes));
  for (int p = 0; p < probes; ++p)
    samples.push_back(draw_sample(table, seed, kProbeBase + static_cast<std::uint64_t>(p)));
  const int nr = n == 1 ? 16 : 12;
  const int na = 2 * nr;
  // The integrand carries log singularities at the sample's zeros, so the
  // error of level k decays like the square of its spacing; comparing k
  // against a reference two levels up (capped by memory for n = 2) and
  // Richardson-correcting the difference estimates the true error of level k.
  const int max_accept = n == 1 ? 4 : 1;
  const int max_level = n == 1 ? 6 : 2;
  const IntensityVector& L = table->L();
  std::map<int, std::vector<double>> values;
  const auto values_at = [&](int level) -> const std::vector<double>& {
    const auto found = values.find(level);
    if (found != values.end()) return found->second;
    const StokesRule rule = make_stokes_rule(form, L, std::vector<int>(n, nr << level),
                                             std::vector<int>(n, na << level));
    std::vector<double> vals(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) vals[i] = statistic_stokes(samples[i], rule);
    return values.emplace(level, std::move(vals)).first->second;
  };
  for (int level = 0; level <= max_accept; ++level) {
    const int ref = std::min(level + 2, max_level);
    const double spacing_ratio_sq = std::pow(0.25, ref - level);
    const std::vector<double>& coarse = values_at(level);
    const std::vector<double>& fine = values_at(ref);
    bool ok = true;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double estimated = std::abs(coarse[i] - fine[i]) / (1.0 - spacing_ratio_sq);
      if (estimated > rtol * (1.0 + std::abs(fine[i]))) ok = false;
    }
    if (ok)
      return make_stokes_rule(form, L, std::vector<int>(n, nr << level),
                              std::vector<int>(n, na << level));
  }
  throw numerical_error("calibrate_stokes_rule: quadrature did not stabilize");
}

double statistic_zeros(const GafSample& s, const TestForm& form) {
  if (s.dim() != 1 || form.n != 1)
    throw std::invalid_argument("statistic_zeros: univariate only");
  const std::vector<Complex> roots = zeros_in_disk(s, form.support_box[0]);
  double acc = 0.0;
  for (const Complex& root : roots) {
    const Complex z[1] = {root};
    acc += form.psi(std::span<const Complex>(z, 1));
  }
  return acc;
}

double predicted_variance(const TestForm& form, const IntensityVector& L) {
  if (L.dim() != form.n) throw std::invalid_argument("predicted_variance: dimension mismatch");
  const double constant = zeta_constant(static_cast<int>(form.n) + 2) / L.product();
  if (form.separable_radial()) {
    // Dphi = sum_j P_j prod_{k != j} Q_k with P = (1-r^2)^2 lap(r^2), Q = g(r^2);
    // (Dphi)^2 then splits into products of 1-D radial integrals.
    const auto P = [&form](std::size_t j, double r) {
      const double one_minus = 1.0 - r * r;
      return one_minus * one_minus * form.radial[j].lap(r * r);
    };
    const auto Q = [&form](std::size_t j, double r) { return form.radial[j].g(r * r); };
    if (form.n == 1) {
      const double ipp =
          radial_nu_integral([&](double r) { return P(0, r) * P(0, r); },
                             form.radial[0].support_radius, 1e-10);
      return constant * ipp;
    }
    if (form.n == 2) {
      double i_pp[2], i_pq[2], i_qq[2];
      for (std::size_t j = 0; j < 2; ++j) {
        const double R = form.radial[j].support_radius;
        i_pp[j] = radial_nu_integral([&](double r) { return P(j, r) * P(j, r); }, R, 1e-10);
        i_pq[j] = radial_nu_integral([&](double r) { return P(j, r) * Q(j, r); }, R, 1e-10);
        i_qq[j] = radial_nu_integral([&](double r) { return Q(j, r) * Q(j, r); }, R, 1e-10);
      }
      return constant * (i_pp[0] * i_qq[1] + 2.0 * i_pq[0] * i_pq[1] + i_qq[0] * i_pp[1]);
    }
  }
  const double integral = nu_integrate(
      [&form](std::span<const Complex> z) {
        const double d = dphi(form, z);
        return d * d;
      },
      form.support_box, 1e-8);
  return constant * integral;
}

double zeta_constant(int s) {
  if (s < 2) throw std::invalid_argument("zeta_constant: s must be >= 2");
  const double sd = static_cast<double>(s);
  const int N = 100;
  double sum = 0.0;
  for (int m = 1; m <= N; ++m) sum += std::pow(static_cast<double>(m), -sd);
  const double Nd = static_cast<double>(N);
  sum += std::pow(Nd, 1.0 - sd) / (sd - 1.0);
  sum -= 0.5 * std::pow(Nd, -sd);
  sum += sd * std::pow(Nd, -sd - 1.0) / 12.0;
  sum -= sd * (sd + 1.0) * (sd + 2.0) * std::pow(Nd, -sd - 3.0) / 720.0;
  return sum;
}

double epsilon_mean_value(double t) {
  if (!(t > 0.0) || t >= 1.0) throw std::invalid_argument("epsilon_mean_value: need 0 < t < 1");
  const double u = t * t / (1.0 - t * t);
  if (u < 1e-4) return u * (0.5 - u / 6.0 + u * u / 12.0);
  return ((1.0 + u) * std::log1p(u) - u) / u;
}

namespace {

// nu-average of log |f-hat|^2 over the centered disk E(0, s) for a univariate
// sample recentred at lambda. Writing f = lead prod_i (z - z_i), the factor
// (z - z_i) pulled back through phi_lambda(xi) = (xi + lambda)/(1 + lbar xi)
// becomes (1 - lbar z_i)(xi - a_i) / (1 + lbar xi) with a_i the Moebius image
// of z_i, so the circular average of log|f-hat o phi|^2 at |xi| = r is
//   2 log|lead| + 2 sum_i (log|1 - lbar z_i| + log max(r, |a_i|))
//     + L (log(1-|lambda|^2) + log(1-r^2)),
// because log|1 + lbar xi| is harmonic and zero-free on |xi| <= r. Mapping
// the roots (rather than transforming the coefficient vector) keeps the
// computation stable at high truncation degrees, where the recentred
// coefficients only emerge after massive cancellation.
double centered_log_average_1d(const GafSample& s, Complex lambda, double radius) {
  const double L = s.L()[0];
  const Complex lbar = std::conj(lambda);
  std::size_t top = s.coeff.size();
  while (top > 0 && s.coeff[top - 1] == Complex(0.0, 0.0)) --top;
  if (top == 0) throw numerical_error("mean_value_inequality: identically zero sample");
  double base =
      2.0 * std::log(std::abs(s.coeff[top - 1])) + L * std::log1p(-std::norm(lambda));
  std::vector<double> moduli;
  if (top > 1) {
    for (const Complex& root :
         polynomial_roots(std::span<const Complex>(s.coeff.data(), top))) {
      const Complex scale = Complex(1.0, 0.0) - lbar * root;
      if (std::abs(scale) < 1e-300) {
        // Root at the pole of the automorphism: the factor is constant in xi.
        base += 2.0 * std::log(std::abs(lambda - root));
        continue;
      }
      base += 2.0 * std::log(std::abs(scale));
      moduli.push_back(std::abs((root - lambda) / scale));
    }
  }
  const auto mean_at = [&](double r) {
    double acc = base + L * std::log1p(-r * r);
    for (double m : moduli) acc += 2.0 * std::log(std::max(r, m));
    return acc;
  };
  // Radial integration, split at the root moduli so each panel is smooth.
  std::vector<double> cuts = {0.0, radius};
  for (double m : moduli)
    if (m > 1e-14 && m < radius - 1e-14) cuts.push_back(m);
  std::sort(cuts.begin(), cuts.end());
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] < 1e-14) continue;
    integral += adaptive_gl(
        [&](double r) {
          const double one_minus = 1.0 - r * r;
          return mean_at(r) * 2.0 * r / (one_minus * one_minus);
        },
        cuts[i], cuts[i + 1], 1e-9);
  }
  const double volume = radius * radius / (1.0 - radius * radius);
  return integral / volume;
}

// nu-average of log |f-hat|^2 over E(lambda, radii) for a bivariate sample.
// The recentring automorphism acts coordinate by coordinate, so the pulled
// back polar grid stays a tensor product and the sample can run through the
// separable grid evaluator; rows are blocked to bound the value buffer.
double centered_log_average_2d(const GafSample& s, const PolydiskPoint& lambda,
                               std::span<const double> radii, double rtol) {
  constexpr int kBaseRadial = 16;
  constexpr int kBaseAngular = 32;
  constexpr int kMaxLevels = 4;
  constexpr std::size_t kRowBlock = 128;
  double volume = 1.0;
  for (double r : radii) volume *= r * r / (1.0 - r * r);
  double prev = 0.0;
  bool have_prev = false;
  for (int level = 0; level < kMaxLevels; ++level) {
    const CoordinateRule r1 =
        coordinate_polar_rule(radii[0], kBaseRadial << level, kBaseAngular << level);
    const CoordinateRule r2 =
        coordinate_polar_rule(radii[1], kBaseRadial << level, kBaseAngular << level);
    const CoordinateRule* rules[2] = {&r1, &r2};
    std::vector<Complex> mapped[2];
    std::vector<double> offset[2];
    for (std::size_t j = 0; j < 2; ++j) {
      const Complex lam = lambda[j];
      const Complex lbar = std::conj(lam);
      mapped[j].reserve(rules[j]->nodes.size());
      offset[j].reserve(rules[j]->nodes.size());
      for (const Complex& xi : rules[j]->nodes) {
        const Complex z = (xi + lam) / (Complex(1.0, 0.0) + lbar * xi);
        mapped[j].push_back(z);
        offset[j].push_back(s.L()[j] * std::log1p(-std::norm(z)));
      }
    }
    const std::size_t g2 = mapped[1].size();
    double acc = 0.0;
    std::vector<Complex> values;
    for (std::size_t row = 0; row < mapped[0].size(); row += kRowBlock) {
      const std::size_t count = std::min(kRowBlock, mapped[0].size() - row);
      values.resize(count * g2);
      evaluate_grid2(s, std::span<const Complex>(mapped[0].data() + row, count), mapped[1],
                     values);
      for (std::size_t i = 0; i < count; ++i) {
        double inner = 0.0;
        for (std::size_t k = 0; k < g2; ++k) {
          double nsq = std::norm(values[i * g2 + k]);
          for (int attempt = 1; attempt <= 4 && (nsq == 0.0 || !std::isfinite(nsq));
               ++attempt) {
            // Node fell on a zero of f; nudge it toward the origin and retry.
            const double shrink = 1.0 - attempt * 1e-9;
            nsq = std::norm(evaluate(
                s, PolydiskPoint({mapped[0][row + i] * shrink, mapped[1][k] * shrink})));
          }
          if (nsq == 0.0 || !std::isfinite(nsq))
            throw numerical_error("mean_value_inequality: node stuck on a zero of f");
          inner += r2.weights[k] * (std::log(nsq) + offset[0][row + i] + offset[1][k]);
        }
        acc += r1.weights[row + i] * inner;
      }
    }
    const double avg = acc / volume;
    if (have_prev && std::abs(avg - prev) <= rtol * (1.0 + std::abs(avg))) return avg;
    prev = avg;
    have_prev = true;
  }
  throw numerical_error("mean_value_inequality: quadrature did not converge");
}

}  // namespace

MeanValueReport mean_value_inequality(const GafSample& s, const PolydiskPoint& lambda,
                                      std::span<const double> radii, double tol) {
  const std::size_t n = s.dim();
  if (lambda.dim() != n || radii.size() != n)
    throw std::invalid_argument("mean_value_inequality: dimension mismatch");
  for (std::size_t j = 0; j < n; ++j) {
    if (!(radii[j] > 0.0) || radii[j] >= 1.0)
      throw std::invalid_argument("mean_value_inequality: radii must lie in (0, 1)");
    const double c = std::abs(lambda[j]);
    if ((c + radii[j]) / (1.0 + c * radii[j]) > s.eval_radius()[j] + 1e-12)
      throw std::invalid_argument("mean_value_inequality: E(lambda, s) outside certified radius");
  }
  if (n > 2) throw std::invalid_argument("mean_value_inequality: supports n = 1 or 2");
  MeanValueReport report;
  report.lhs = log_normalized_sq(s, lambda);
  if (n == 1) {
    report.average = centered_log_average_1d(s, lambda[0], radii[0]);
  } else {
    report.average = centered_log_average_2d(s, lambda, radii, std::max(tol / 3.0, 1e-12));
  }
  report.rhs = report.average;
  for (std::size_t j = 0; j < n; ++j) report.rhs += s.L()[j] * epsilon_mean_value(radii[j]);
  report.holds = report.lhs <= report.rhs + tol * (1.0 + std::abs(report.rhs));
  return report;
}

bool mean_value_inequality_check(const GafSample& s, const PolydiskPoint& lambda,
                                 std::span<const double> radii, double tol) {
  return mean_value_inequality(s, lambda, radii, tol).holds;
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

namespace {

double ks_p_value(double n_eff, double distance) {
  const double sqrt_n = std::sqrt(n_eff);
  const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * distance;
  double p = 0.0;
  bool converged = false;
  for (int j = 1; j <= 100; ++j) {
    const double term = 2.0 * std::exp(-2.0 * j * j * lambda * lambda);
    p += (j % 2 == 1) ? term : -term;
    if (term < 1e-16) {
      converged = true;
      break;
    }
  }
  // The series only fails to shrink as lambda -> 0, where the limit is 1.
  if (!converged) return 1.0;
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

KsResult clt_diagnostic(std::span<const double> values) {
  if (values.size() < 500) throw std::invalid_argument("clt_diagnostic: need at least 500 values");
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double distance = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double cdf = standard_normal_cdf(x[i]);
    distance = std::max(distance, cdf - static_cast<double>(i) / n);
    distance = std::max(distance, static_cast<double>(i + 1) / n - cdf);
  }
  return {distance, ks_p_value(n, distance)};
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> xa(a.begin(), a.end());
  std::vector<double> xb(b.begin(), b.end());
  std::sort(xa.begin(), xa.end());
  std::sort(xb.begin(), xb.end());
  double distance = 0.0;
  std::size_t i = 0;
  std::size_t k = 0;
  while (i < xa.size() && k < xb.size()) {
    // Step past every copy of the smaller value in both samples before
    // comparing the empirical CDFs, so ties contribute no spurious gap.
    const double v = std::min(xa[i], xb[k]);
    while (i < xa.size() && xa[i] == v) ++i;
    while (k < xb.size() && xb[k] == v) ++k;
    const double fa = static_cast<double>(i) / static_cast<double>(xa.size());
    const double fb = static_cast<double>(k) / static_cast<double>(xb.size());
    distance = std::max(distance, std::abs(fa - fb));
  }
  const double n_eff = static_cast<double>(xa.size()) * static_cast<double>(xb.size()) /
                       static_cast<double>(xa.size() + xb.size());
  return {distance, ks_p_value(n_eff, distance)};
}

void ExperimentResult::add(double x) {
  ++trials;
  const double delta = x - mean;
  mean += delta / static_cast<double>(trials);
  m2 += delta * (x - mean);
}

double ExperimentResult::variance() const {
  return trials >= 2 ? m2 / static_cast<double>(trials - 1) : 0.0;
}

double ExperimentResult::standard_error() const {
  return trials >= 1 ? std::sqrt(variance() / static_cast<double>(trials)) : 0.0;
}

ExperimentResult ExperimentResult::merged(const ExperimentResult& a, const ExperimentResult& b) {
  if (a.trials == 0) return b;
  if (b.trials == 0) return a;
  ExperimentResult out;
  out.trials = a.trials + b.trials;
  const double na = static_cast<double>(a.trials);
  const double nb = static_cast<double>(b.trials);
  const double total = na + nb;
  const double delta = b.mean - a.mean;
  out.mean = a.mean + delta * nb / total;
  out.m2 = a.m2 + b.m2 + delta * delta * na * nb / total;
  out.diagnostics = a.diagnostics;
  for (const auto& [key, value] : b.diagnostics) out.diagnostics[key] += value;
  out.config_echo = a.config_echo.empty() ? b.config_echo : a.config_echo;
  return out;
}

}  // namespace polygaf
