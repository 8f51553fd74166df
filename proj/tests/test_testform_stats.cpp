#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "polygaf/rng.hpp"
#include "polygaf/sampler.hpp"
#include "polygaf/stats.hpp"
#include "polygaf/testform.hpp"
#include "polygaf/zeros1d.hpp"

using namespace polygaf;

namespace {

GafSample sample_from_coeff(std::vector<Complex> coeff, double eval_radius, double L) {
  DegreeBox box{{static_cast<int>(coeff.size()) - 1}};
  auto table = BasisCoefficientTable::with_box(IntensityVector{L}, box, {eval_radius});
  GafSample s;
  s.table = table;
  s.coeff = std::move(coeff);
  s.a = s.coeff;
  return s;
}

}  // namespace

TEST_CASE("nu integration: truncated radial closed form and product structure") {
  // integral of (1 - |z|^2)^5 over |z| < 0.9 against nu has the elementary
  // antiderivative (1 - (1 - R^2)^4) / 4.
  const auto radial = [](std::span<const Complex> z) {
    return std::pow(1.0 - std::norm(z[0]), 5.0);
  };
  const double univariate = nu_integrate(radial, std::vector<double>{0.9});
  CHECK(univariate == doctest::Approx(0.2496741975).epsilon(1e-9));

  const auto product = [](std::span<const Complex> z) {
    return std::pow(1.0 - std::norm(z[0]), 5.0) * std::pow(1.0 - std::norm(z[1]), 3.0);
  };
  const double one_b = nu_integrate(
      [](std::span<const Complex> z) { return std::pow(1.0 - std::norm(z[0]), 3.0); },
      std::vector<double>{0.5});
  const double bivariate = nu_integrate(product, std::vector<double>{0.9, 0.5});
  const double one_a = nu_integrate(radial, std::vector<double>{0.9});
  CHECK(bivariate == doctest::Approx(one_a * one_b).epsilon(1e-8));
}

TEST_CASE("expected statistic: frozen quadrature values and linearity") {
  const TestForm bump = smooth_bump({0.5});
  const double at_twenty = expected_statistic(bump, IntensityVector{20.0});
  CHECK(at_twenty == doctest::Approx(2.3279143085128786).epsilon(1e-8));
  const double at_forty = expected_statistic(bump, IntensityVector{40.0});
  CHECK(at_forty == doctest::Approx(2.0 * at_twenty).epsilon(1e-12));

  const TestForm bump2 = smooth_bump({0.5, 0.5});
  CHECK(expected_statistic(bump2, IntensityVector{5.0, 8.0}) ==
        doctest::Approx(0.17612351340281729).epsilon(1e-8));
}

TEST_CASE("zero-route statistic on explicit polynomials") {
  const TestForm bump = smooth_bump({0.5});
  {
    GafSample s = sample_from_coeff({{-0.3, 0.0}, {1.0, 0.0}}, 0.7, 2.0);
    const double value = statistic_zeros(s, bump);
    CHECK(value == doctest::Approx(std::exp(1.0 - 1.0 / (1.0 - 0.09 / 0.25))).epsilon(1e-12));
  }
  {
    // The zero at 0.8 sits outside the support and must not contribute.
    GafSample s = sample_from_coeff({{0.24, 0.0}, {-1.1, 0.0}, {1.0, 0.0}}, 0.9, 2.0);
    const double value = statistic_zeros(s, bump);
    CHECK(value == doctest::Approx(std::exp(1.0 - 1.0 / (1.0 - 0.09 / 0.25))).epsilon(1e-10));
  }
  {
    GafSample constant = sample_from_coeff({{1.0, 0.0}}, 0.7, 2.0);
    CHECK(statistic_zeros(constant, bump) == 0.0);
  }
}

TEST_CASE("stokes route on the zero-free constant sample") {
  // With f identically c_0, both routes must give exactly zero: the expected
  // term cancels the deterministic log integral for every L and R.
  const TestForm bump = smooth_bump({0.5});
  GafSample constant = sample_from_coeff({{1.0, 0.0}}, 0.62, 20.0);
  const double adaptive = statistic_stokes(constant, bump, 1e-5);
  CHECK(std::abs(adaptive) <= 2e-4 * (1.0 + expected_statistic(bump, IntensityVector{20.0})));

  const int n_rad[] = {128};
  const int n_ang[] = {256};
  const StokesRule rule = make_stokes_rule(bump, IntensityVector{20.0}, n_rad, n_ang);
  CHECK(std::abs(statistic_stokes(constant, rule)) <= 1e-3);
}

TEST_CASE("stokes route: calibrated rule is unbiased for the mean") {
  const TestForm bump = smooth_bump({0.5});
  const IntensityVector L{8.0};
  const auto table = BasisCoefficientTable::certified(L, {0.62}, 1e-12);
  const StokesRule rule = calibrate_stokes_rule(bump, table, 500, 5e-3);
  CHECK(rule.expected == doctest::Approx(expected_statistic(bump, L)).epsilon(1e-10));
  const std::uint64_t trials = 3000;
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const double v = statistic_stokes(draw_sample(table, 500, t), rule);
    const double delta = v - mean;
    mean += delta / static_cast<double>(t + 1);
    m2 += delta * (v - mean);
  }
  const double se = std::sqrt(m2 / static_cast<double>(trials - 1) / static_cast<double>(trials));
  CHECK(std::abs(mean - rule.expected) <= 4.0 * se);
}

TEST_CASE("zero and stokes routes agree path by path") {
  const TestForm bump = smooth_bump({0.5});
  const IntensityVector L{20.0};
  const auto table = BasisCoefficientTable::certified(L, {0.6}, 1e-12);
  int agreements = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    const GafSample s = draw_sample(table, 321, static_cast<std::uint64_t>(t));
    const double by_zeros = statistic_zeros(s, bump);
    const double by_stokes = statistic_stokes(s, bump, 1e-4);
    if (std::abs(by_zeros - by_stokes) <= 1e-3 * (1.0 + std::abs(by_zeros))) ++agreements;
  }
  CHECK(agreements >= 99);
}

TEST_CASE("coordinate exchange leaves the statistic's law unchanged") {
  // Asymmetric form, symmetric intensity: the swapped form must produce the
  // same distribution because coordinate permutations preserve the ensemble.
  const TestForm form = smooth_bump({0.35, 0.55});
  const TestForm swapped = coordinate_swapped(form);
  const IntensityVector L{3.0, 3.0};
  const auto table = BasisCoefficientTable::certified(L, {0.62, 0.62}, 1e-10);
  const int n_rad[] = {12, 12};
  const int n_ang[] = {24, 24};
  const StokesRule rule = make_stokes_rule(form, L, n_rad, n_ang);
  const StokesRule rule_swapped = make_stokes_rule(swapped, L, n_rad, n_ang);
  CHECK(rule.expected == doctest::Approx(rule_swapped.expected).epsilon(1e-6));
  const std::uint64_t trials = 700;
  std::vector<double> direct(trials), exchanged(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    direct[t] = statistic_stokes(draw_sample(table, 91, t), rule);
    exchanged[t] = statistic_stokes(draw_sample(table, 92, t), rule_swapped);
  }
  CHECK(ks_two_sample(direct, exchanged).p_value > 0.005);
}

TEST_CASE("composing with an automorphism leaves the zero statistic's law unchanged") {
  const TestForm bump = smooth_bump({0.4});
  const MoebiusAutomorphism map{PolydiskPoint({Complex(0.25, 0.0)})};
  const TestForm moved = composed_with(bump, map);
  const IntensityVector L{6.0};
  const auto table = BasisCoefficientTable::certified(L, {0.8}, 1e-12);
  const std::uint64_t trials = 1500;
  std::vector<double> base(trials), pulled(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    base[t] = statistic_zeros(draw_sample(table, 71, t), bump);
    pulled[t] = statistic_zeros(draw_sample(table, 72, t), moved);
  }
  CHECK(ks_two_sample(base, pulled).p_value > 0.005);
}

TEST_CASE("epsilon of the mean-value lemma") {
  CHECK(epsilon_mean_value(0.5) == doctest::Approx(0.15072828980712364).epsilon(1e-14));
  for (int i = 1; i < 1000; ++i) {
    const double t = static_cast<double>(i) / 1000.0;
    const double u = t * t / (1.0 - t * t);
    const double eps = epsilon_mean_value(t);
    CHECK(eps > 0.0);
    CHECK(eps <= u * (1.0 + 1e-12));
  }
  // The small-argument series and the closed form meet smoothly.
  CHECK(epsilon_mean_value(0.0099995) ==
        doctest::Approx(epsilon_mean_value(0.0100005)).epsilon(1e-7));
  CHECK_THROWS_AS(epsilon_mean_value(0.0), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_mean_value(1.0), std::invalid_argument);
}

TEST_CASE("mean-value inequality holds sample by sample") {
  const IntensityVector L{5.0};
  const auto table = BasisCoefficientTable::certified(L, {0.76}, 1e-12);
  const PolydiskPoint center = PolydiskPoint::origin(1);
  const std::vector<double> s{0.4};
  for (std::uint64_t t = 0; t < 300; ++t) {
    const MeanValueReport report =
        mean_value_inequality(draw_sample(table, 811, t), center, s);
    CHECK(report.holds);
    CHECK(report.rhs == doctest::Approx(report.average + 5.0 * epsilon_mean_value(0.4))
                            .epsilon(1e-12));
  }
  const PolydiskPoint off_center({Complex(0.3, 0.0)});
  const std::vector<double> s_small{0.3};
  for (std::uint64_t t = 0; t < 100; ++t)
    CHECK(mean_value_inequality_check(draw_sample(table, 812, t), off_center, s_small));

  const IntensityVector L2{2.0, 3.0};
  const auto table2 = BasisCoefficientTable::certified(L2, {0.7, 0.7}, 1e-10);
  const std::vector<double> s2{0.3, 0.3};
  for (std::uint64_t t = 0; t < 10; ++t)
    CHECK(mean_value_inequality_check(draw_sample(table2, 813, t), PolydiskPoint::origin(2), s2,
                                      1e-3));
}

TEST_CASE("kolmogorov-smirnov diagnostics") {
  const std::uint64_t count = 2000;
  std::vector<double> normal(count), shifted(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    // Re(a) of a standard complex gaussian has variance 1/2.
    normal[i] = standard_complex_gaussian(3141, 0, i).real() * std::numbers::sqrt2;
    shifted[i] = normal[i] + 1.0;
  }
  const KsResult against_normal = clt_diagnostic(normal);
  CHECK(against_normal.p_value > 0.01);
  CHECK(against_normal.distance < 0.04);
  const KsResult off = clt_diagnostic(shifted);
  CHECK(off.p_value < 1e-6);

  const KsResult self = ks_two_sample(normal, normal);
  CHECK(self.distance == 0.0);
  CHECK(self.p_value > 0.99);
  CHECK(ks_two_sample(normal, shifted).p_value < 1e-6);

  std::vector<double> short_sample(100, 0.0);
  CHECK_THROWS_AS(clt_diagnostic(short_sample), std::invalid_argument);

  CHECK(standard_normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(standard_normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
  CHECK(standard_normal_cdf(-8.0) < 1e-14);
}

TEST_CASE("zeta constants") {
  CHECK(zeta_constant(2) ==
        doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0).epsilon(1e-14));
  CHECK(zeta_constant(3) == doctest::Approx(1.2020569031595943).epsilon(1e-14));
  CHECK(zeta_constant(4) ==
        doctest::Approx(std::pow(std::numbers::pi, 4) / 90.0).epsilon(1e-14));
  CHECK(zeta_constant(5) == doctest::Approx(1.0369277551433699).epsilon(1e-14));
  CHECK(zeta_constant(40) == doctest::Approx(1.0).epsilon(1e-11));
  CHECK_THROWS_AS(zeta_constant(1), std::invalid_argument);
}

TEST_CASE("experiment results: welford moments and order-stable merging") {
  ExperimentResult all;
  ExperimentResult left, right;
  for (int k = 1; k <= 100; ++k) {
    all.add(static_cast<double>(k));
    (k <= 37 ? left : right).add(static_cast<double>(k));
  }
  CHECK(all.trials == 100);
  CHECK(all.mean == doctest::Approx(50.5).epsilon(1e-15));
  CHECK(all.variance() == doctest::Approx(841.66666666666663).epsilon(1e-13));
  CHECK(all.standard_error() ==
        doctest::Approx(std::sqrt(841.66666666666663 / 100.0)).epsilon(1e-13));

  const ExperimentResult merged = ExperimentResult::merged(left, right);
  CHECK(merged.trials == all.trials);
  CHECK(merged.mean == doctest::Approx(all.mean).epsilon(1e-14));
  CHECK(merged.m2 == doctest::Approx(all.m2).epsilon(1e-12));

  const ExperimentResult with_empty = ExperimentResult::merged(all, ExperimentResult{});
  CHECK(with_empty.trials == all.trials);
  CHECK(with_empty.mean == doctest::Approx(all.mean).epsilon(1e-15));
}
