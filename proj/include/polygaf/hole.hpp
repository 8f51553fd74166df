#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "polygaf/geometry.hpp"

namespace polygaf {

// Monte Carlo estimate of an event probability. Uncertain trials (where the
// per-sample certification declined to decide) are excluded from both the
// numerator and the denominator and reported on the side.
struct ProbabilityEstimate {
  std::uint64_t trials = 0;     // attempted
  std::uint64_t valid = 0;      // trials - uncertain
  std::uint64_t successes = 0;  // events among the valid trials
  std::uint64_t uncertain = 0;
  double estimate = 0.0;
  double ci_low = 0.0;  // 95% Wilson score interval
  double ci_high = 0.0;
};

ProbabilityEstimate wilson_estimate(std::uint64_t successes, std::uint64_t valid,
                                    std::uint64_t uncertain, std::uint64_t trials);

// P[no zeros in E(0, r)] for a univariate GAF of intensity L, via the
// argument-principle hole test with a Rouche-style guard (kappa times the
// truncation tail's standard deviation).
ProbabilityEstimate hole_probability_mc(double L, double r, std::uint64_t trials,
                                        std::uint64_t seed, int workers = 0,
                                        double tail_tol = 1e-24, double kappa = 10.0);

// Heuristic n >= 2 variant: a trial counts as a hole when the minimum of the
// normalized |f-hat| over a tensor grid in E(0, r) stays above the grid
// spacing times an empirical gradient bound read off the same grid. No
// certification — outputs carrying this number are labeled heuristic.
ProbabilityEstimate hole_probability_grid(const IntensityVector& L, std::span<const double> r,
                                          std::uint64_t trials, std::uint64_t seed,
                                          int grid_density = 16, int workers = 0,
                                          double tail_tol = 1e-12);

// P[|count/L - nu(E(0,r))| > delta] for the zero count of a univariate GAF.
ProbabilityEstimate deviation_probability_mc(double L, double r, double delta,
                                             std::uint64_t trials, std::uint64_t seed,
                                             int workers = 0, double tail_tol = 1e-12);

// Power-law fit log P = -c * scale^beta through least squares on
// log(-log P) vs log(scale); scale is L for n = 1 and (sum L)(prod L) in
// general. Needs >= 3 points with P in (0, 1).
struct DecayFitInput {
  double scale = 0.0;
  double log_p = 0.0;
};
struct DecayFit {
  double beta = 0.0;
  double c = 0.0;
  std::vector<double> residuals;  // in log(-log P) space
};
DecayFit decay_fit(std::span<const DecayFitInput> points);

}  // namespace polygaf
