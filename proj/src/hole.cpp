#include "polygaf/hole.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "polygaf/common.hpp"
#include "polygaf/runner.hpp"
#include "polygaf/sampler.hpp"
#include "polygaf/zeros1d.hpp"

namespace polygaf {

ProbabilityEstimate wilson_estimate(std::uint64_t successes, std::uint64_t valid,
                                    std::uint64_t uncertain, std::uint64_t trials) {
  ProbabilityEstimate out;
  out.trials = trials;
  out.valid = valid;
  out.successes = successes;
  out.uncertain = uncertain;
  if (valid == 0) throw numerical_error("probability estimate: no valid trials");
  const double n = static_cast<double>(valid);
  const double p = static_cast<double>(successes) / n;
  out.estimate = p;
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  out.ci_low = std::max(0.0, center - half);
  out.ci_high = std::min(1.0, center + half);
  return out;
}

namespace {

ProbabilityEstimate reduce_outcomes(std::span<const signed char> outcomes) {
  // 1 = event, 0 = no event, -1 = uncertain; reduced in trial order.
  std::uint64_t successes = 0;
  std::uint64_t uncertain = 0;
  for (signed char o : outcomes) {
    if (o < 0)
      ++uncertain;
    else
      successes += static_cast<std::uint64_t>(o);
  }
  const std::uint64_t trials = outcomes.size();
  return wilson_estimate(successes, trials - uncertain, uncertain, trials);
}

}  // namespace

ProbabilityEstimate hole_probability_mc(double L, double r, std::uint64_t trials,
                                        std::uint64_t seed, int workers, double tail_tol,
                                        double kappa) {
  if (!(r > 0.0) || r >= 1.0) throw std::invalid_argument("hole_probability_mc: r must be in (0,1)");
  if (trials < 1000) throw std::invalid_argument("hole_probability_mc: need at least 1000 trials");
  // Small margin past r so contour perturbations stay certified.
  const double eval_radius = std::min(r + 1e-5, kCoordModulusCap);
  const auto table = BasisCoefficientTable::certified(IntensityVector{L}, {eval_radius}, tail_tol);
  std::vector<signed char> outcomes;
  run_indexed<signed char>(
      trials, workers,
      [&table, seed, r, kappa](std::uint64_t t) -> signed char {
        const GafSample s = draw_sample(table, seed, t);
        switch (hole_test(s, r, kappa)) {
          case HoleStatus::kHole:
            return 1;
          case HoleStatus::kNotHole:
            return 0;
          default:
            return -1;
        }
      },
      outcomes);
  return reduce_outcomes(outcomes);
}

ProbabilityEstimate hole_probability_grid(const IntensityVector& L, std::span<const double> r,
                                          std::uint64_t trials, std::uint64_t seed,
                                          int grid_density, int workers, double tail_tol) {
  const std::size_t n = L.dim();
  if (n != 2) throw std::invalid_argument("hole_probability_grid: implemented for n = 2");
  if (r.size() != n) throw std::invalid_argument("hole_probability_grid: radius dimension mismatch");
  if (grid_density < 4) throw std::invalid_argument("hole_probability_grid: density too small");
  std::vector<double> radius(r.begin(), r.end());
  const auto table = BasisCoefficientTable::certified(L, radius, tail_tol);
  // Per-coordinate polar grid: grid_density radii x 2*grid_density angles.
  const int n_rad = grid_density;
  const int n_ang = 2 * grid_density;
  std::vector<std::vector<Complex>> nodes(n);
  std::vector<std::vector<double>> half_log(n);  // (L_j/2) log(1 - |z|^2) per node
  double spacing = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (int i = 0; i < n_rad; ++i) {
      const double rad = radius[j] * (i + 0.5) / n_rad;
      for (int k = 0; k < n_ang; ++k) {
        const double theta = k * 2.0 * std::numbers::pi / n_ang;
        const Complex z = std::polar(rad, theta);
        nodes[j].push_back(z);
        half_log[j].push_back(0.5 * L[j] * std::log1p(-std::norm(z)));
      }
    }
    spacing = std::max(spacing, radius[j] / n_rad);
    spacing = std::max(spacing, radius[j] * std::numbers::pi / n_ang);
  }
  const std::size_t g1 = nodes[0].size();
  const std::size_t g2 = nodes[1].size();
  std::vector<signed char> outcomes;
  run_indexed<signed char>(
      trials, workers,
      [&](std::uint64_t t) -> signed char {
        const GafSample s = draw_sample(table, seed, t);
        std::vector<Complex> values(g1 * g2);
        evaluate_grid2(s, nodes[0], nodes[1], values);
        // Normalized magnitudes F = |f| (1-|z1|^2)^{L1/2} (1-|z2|^2)^{L2/2}.
        std::vector<double> F(g1 * g2);
        double min_f = std::numeric_limits<double>::infinity();
        for (std::size_t i1 = 0; i1 < g1; ++i1)
          for (std::size_t i2 = 0; i2 < g2; ++i2) {
            const std::size_t flat = i1 * g2 + i2;
            F[flat] = std::abs(values[flat]) * std::exp(half_log[0][i1] + half_log[1][i2]);
            min_f = std::min(min_f, F[flat]);
          }
        // Empirical gradient bound: steepest |delta F| / |delta z| between
        // neighbors along each coordinate's radial and angular directions.
        double grad = 0.0;
        const auto consider = [&](std::size_t a, std::size_t b, Complex za, Complex zb) {
          const double dz = std::abs(za - zb);
          if (dz > 0.0) grad = std::max(grad, std::abs(F[a] - F[b]) / dz);
        };
        for (std::size_t i1 = 0; i1 < g1; ++i1)
          for (std::size_t i2 = 0; i2 < g2; ++i2) {
            const std::size_t flat = i1 * g2 + i2;
            const std::size_t i1r = i1 + static_cast<std::size_t>(n_ang);  // next radius, coord 1
            if (i1r < g1) consider(flat, i1r * g2 + i2, nodes[0][i1], nodes[0][i1r]);
            const std::size_t i1a =
                (i1 / static_cast<std::size_t>(n_ang)) * static_cast<std::size_t>(n_ang) +
                (i1 + 1) % static_cast<std::size_t>(n_ang);
            consider(flat, i1a * g2 + i2, nodes[0][i1], nodes[0][i1a]);
            const std::size_t i2r = i2 + static_cast<std::size_t>(n_ang);
            if (i2r < g2) consider(flat, i1 * g2 + i2r, nodes[1][i2], nodes[1][i2r]);
            const std::size_t i2a =
                (i2 / static_cast<std::size_t>(n_ang)) * static_cast<std::size_t>(n_ang) +
                (i2 + 1) % static_cast<std::size_t>(n_ang);
            consider(flat, i1 * g2 + i2a, nodes[1][i2], nodes[1][i2a]);
          }
        return min_f > spacing * grad ? 1 : 0;
      },
      outcomes);
  return reduce_outcomes(outcomes);
}

ProbabilityEstimate deviation_probability_mc(double L, double r, double delta,
                                             std::uint64_t trials, std::uint64_t seed, int workers,
                                             double tail_tol) {
  if (!(r > 0.0) || r >= 1.0)
    throw std::invalid_argument("deviation_probability_mc: r must be in (0,1)");
  const double volume = r * r / (1.0 - r * r);
  const auto table = BasisCoefficientTable::certified(IntensityVector{L}, {r}, tail_tol);
  std::vector<signed char> outcomes;
  run_indexed<signed char>(
      trials, workers,
      [&table, seed, r, L, delta, volume](std::uint64_t t) -> signed char {
        const GafSample s = draw_sample(table, seed, t);
        int count = 0;
        try {
          count = count_zeros(s, r);
        } catch (const numerical_error&) {
          return -1;  // root finder failed; excluded and reported
        }
        return std::abs(static_cast<double>(count) / L - volume) > delta ? 1 : 0;
      },
      outcomes);
  return reduce_outcomes(outcomes);
}

DecayFit decay_fit(std::span<const DecayFitInput> points) {
  std::vector<double> t, y;
  for (const auto& pt : points) {
    if (!(pt.scale > 0.0) || !std::isfinite(pt.log_p) || !(pt.log_p < 0.0)) continue;
    t.push_back(std::log(pt.scale));
    y.push_back(std::log(-pt.log_p));
  }
  if (t.size() < 3) throw std::invalid_argument("decay_fit: need at least 3 usable points");
  const double n = static_cast<double>(t.size());
  double t_mean = 0.0, y_mean = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    t_mean += t[i];
    y_mean += y[i];
  }
  t_mean /= n;
  y_mean /= n;
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    cov += (t[i] - t_mean) * (y[i] - y_mean);
    var += (t[i] - t_mean) * (t[i] - t_mean);
  }
  if (var == 0.0) throw std::invalid_argument("decay_fit: degenerate scales");
  DecayFit fit;
  fit.beta = cov / var;
  fit.c = std::exp(y_mean - fit.beta * t_mean);
  fit.residuals.resize(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    fit.residuals[i] = y[i] - (std::log(fit.c) + fit.beta * t[i]);
  return fit;
}

}  // namespace polygaf
