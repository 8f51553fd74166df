#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "polygaf/hole.hpp"
#include "polygaf/runner.hpp"

using namespace polygaf;

TEST_CASE("wilson interval: frozen values and bookkeeping") {
  const ProbabilityEstimate est = wilson_estimate(3, 10, 2, 12);
  CHECK(est.trials == 12);
  CHECK(est.valid == 10);
  CHECK(est.successes == 3);
  CHECK(est.uncertain == 2);
  CHECK(est.estimate == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(est.ci_low == doctest::Approx(0.10779126740630099).epsilon(1e-12));
  CHECK(est.ci_high == doctest::Approx(0.6032218525388546).epsilon(1e-12));

  const ProbabilityEstimate none = wilson_estimate(0, 50, 0, 50);
  CHECK(none.estimate == 0.0);
  CHECK(none.ci_low < 1e-15);
  CHECK(none.ci_high == doctest::Approx(0.07134759913335872).epsilon(1e-12));

  const ProbabilityEstimate full = wilson_estimate(50, 50, 0, 50);
  CHECK(full.estimate == 1.0);
  CHECK(full.ci_high == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(full.ci_low < 1.0);
  CHECK(full.ci_low > 0.9);

  CHECK_THROWS_AS(wilson_estimate(0, 0, 5, 5), numerical_error);
}

TEST_CASE("hole probability at unit intensity matches the determinantal product") {
  // The L = 1 zero ensemble is determinantal with hole probability
  // prod_k (1 - r^{2k}); at r = 0.5 that is 0.68853753712034.
  const ProbabilityEstimate est = hole_probability_mc(1.0, 0.5, 20000, 42);
  CHECK(static_cast<double>(est.uncertain) / static_cast<double>(est.trials) < 0.005);
  CHECK(std::abs(est.estimate - 0.68853753712034) < 0.011);
  CHECK(est.ci_low < 0.68853753712034);
  CHECK(est.ci_high > 0.68853753712034);
}

TEST_CASE("hole probability decreases in radius and in intensity") {
  const ProbabilityEstimate small_disk = hole_probability_mc(1.0, 0.3, 4000, 7);
  const ProbabilityEstimate large_disk = hole_probability_mc(1.0, 0.5, 4000, 7);
  CHECK(small_disk.ci_low > large_disk.ci_high);

  const ProbabilityEstimate low_intensity = hole_probability_mc(1.0, 0.5, 4000, 8);
  const ProbabilityEstimate high_intensity = hole_probability_mc(3.0, 0.5, 4000, 8);
  CHECK(high_intensity.ci_high < low_intensity.ci_low);
}

TEST_CASE("hole probability is reproducible across worker counts") {
  const ProbabilityEstimate serial = hole_probability_mc(2.0, 0.4, 2000, 99, 1);
  const ProbabilityEstimate pooled = hole_probability_mc(2.0, 0.4, 2000, 99, 3);
  CHECK(serial.successes == pooled.successes);
  CHECK(serial.valid == pooled.valid);
  CHECK(serial.uncertain == pooled.uncertain);
  CHECK(serial.estimate == pooled.estimate);
}

TEST_CASE("grid heuristic for bivariate holes stays in range and is deterministic") {
  const IntensityVector L{1.0, 1.0};
  const std::vector<double> r{0.3, 0.3};
  const ProbabilityEstimate first = hole_probability_grid(L, r, 400, 5, 12);
  CHECK(first.trials == 400);
  CHECK(first.valid + first.uncertain == first.trials);
  CHECK(first.estimate >= 0.0);
  CHECK(first.estimate <= 1.0);
  const ProbabilityEstimate second = hole_probability_grid(L, r, 400, 5, 12);
  CHECK(first.estimate == second.estimate);
  CHECK(first.successes == second.successes);
}

TEST_CASE("deviation probability: bookkeeping and monotonicity in the threshold") {
  const ProbabilityEstimate loose = deviation_probability_mc(4.0, 0.5, 0.25, 3000, 11);
  const ProbabilityEstimate strict = deviation_probability_mc(4.0, 0.5, 0.75, 3000, 11);
  CHECK(loose.valid + loose.uncertain == loose.trials);
  CHECK(loose.estimate >= strict.estimate);

  const ProbabilityEstimate repeat = deviation_probability_mc(4.0, 0.5, 0.25, 3000, 11);
  CHECK(repeat.successes == loose.successes);
}

TEST_CASE("decay fit recovers a synthetic power law") {
  std::vector<DecayFitInput> points;
  for (double scale : {2.0, 4.0, 8.0, 16.0}) {
    points.push_back({scale, -0.7 * scale * scale});
  }
  const DecayFit fit = decay_fit(points);
  CHECK(fit.beta == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(fit.c == doctest::Approx(0.7).epsilon(1e-10));
  for (double r : fit.residuals) CHECK(std::abs(r) < 1e-10);

  std::vector<DecayFitInput> too_few{{2.0, -1.0}, {4.0, -2.0}};
  CHECK_THROWS_AS(decay_fit(too_few), std::invalid_argument);
  std::vector<DecayFitInput> degenerate{{2.0, -1.0}, {2.0, -2.0}, {2.0, -3.0}};
  CHECK_THROWS_AS(decay_fit(degenerate), std::invalid_argument);
}

TEST_CASE("indexed runner: slot determinism and error propagation") {
  const std::function<double(std::uint64_t)> fn = [](std::uint64_t t) {
    return std::sin(static_cast<double>(t)) * static_cast<double>(t);
  };
  std::vector<double> serial, pooled;
  run_indexed<double>(500, 1, fn, serial);
  run_indexed<double>(500, 3, fn, pooled);
  CHECK(serial == pooled);

  const std::function<int(std::uint64_t)> faulty = [](std::uint64_t t) {
    if (t == 5) throw std::runtime_error("trial 5 failed");
    return static_cast<int>(t);
  };
  std::vector<int> out;
  CHECK_THROWS_WITH_AS(run_indexed<int>(20, 2, faulty, out), "trial 5 failed",
                       std::runtime_error);
}
