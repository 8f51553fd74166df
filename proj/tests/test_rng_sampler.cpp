#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "polygaf/kernel.hpp"
#include "polygaf/rng.hpp"
#include "polygaf/sampler.hpp"
#include "polygaf/stats.hpp"

using namespace polygaf;

TEST_CASE("philox4x32-10 known-answer vectors") {
  const auto zero = philox4x32({0u, 0u, 0u, 0u}, {0u, 0u});
  CHECK(zero[0] == 0x6627e8d5u);
  CHECK(zero[1] == 0xe169c58du);
  CHECK(zero[2] == 0xbc57ac4cu);
  CHECK(zero[3] == 0x9b00dbd8u);

  const auto pi = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                             {0xa4093822u, 0x299f31d0u});
  CHECK(pi[0] == 0xd16cfe09u);
  CHECK(pi[1] == 0x94fdccebu);
  CHECK(pi[2] == 0x5001e420u);
  CHECK(pi[3] == 0x24126ea1u);
}

TEST_CASE("uniform pairs: range, determinism, stream separation") {
  bool any_difference = false;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const auto u = uniform_pair(5, 17, i);
    CHECK(u[0] > 0.0);
    CHECK(u[0] <= 1.0);
    CHECK(u[1] >= 0.0);
    CHECK(u[1] < 1.0);
    const auto again = uniform_pair(5, 17, i);
    CHECK(u[0] == again[0]);
    CHECK(u[1] == again[1]);
    if (u != uniform_pair(5, 18, i)) any_difference = true;
  }
  CHECK(any_difference);
}

TEST_CASE("complex gaussian moments") {
  const std::uint64_t trials = 200000;
  Complex mean{0.0, 0.0};
  Complex second{0.0, 0.0};  // E[a^2], which vanishes for a circular gaussian
  double abs_sq = 0.0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const Complex a = standard_complex_gaussian(7, 0, i);
    mean += a;
    second += a * a;
    abs_sq += std::norm(a);
  }
  const double inv = 1.0 / static_cast<double>(trials);
  mean *= inv;
  second *= inv;
  abs_sq *= inv;
  const double se_component = std::sqrt(0.5 * inv);  // each real component has variance 1/2
  CHECK(std::abs(mean.real()) < 4.5 * se_component);
  CHECK(std::abs(mean.imag()) < 4.5 * se_component);
  CHECK(std::abs(abs_sq - 1.0) < 4.5 * std::sqrt(inv));  // Var |a|^2 = 1
  CHECK(std::abs(second.real()) < 4.5 * std::sqrt(inv));
  CHECK(std::abs(second.imag()) < 4.5 * std::sqrt(inv));
}

TEST_CASE("basis coefficients: gamma-ratio values and separability") {
  const IntensityVector one{1.0};
  for (int alpha = 0; alpha <= 5; ++alpha) {
    const int a[] = {alpha};
    CHECK(basis_logsq(a, one) == doctest::Approx(0.0).epsilon(1e-15));
  }
  const IntensityVector two{2.0};
  {
    const int a1[] = {1};
    const int a2[] = {2};
    CHECK(basis_logsq(a1, two) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(basis_logsq(a2, two) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  }
  {
    const IntensityVector three{3.0};
    const int a[] = {2};
    // Gamma(5) / (2! Gamma(3)) = 24 / 4 = 6.
    CHECK(basis_logsq(a, three) == doctest::Approx(std::log(6.0)).epsilon(1e-14));
  }
  // Separability and the direct lgamma formula, n = 2.
  const IntensityVector L{2.7, 5.3};
  for (int a0 = 0; a0 <= 6; ++a0) {
    for (int a1 = 0; a1 <= 6; ++a1) {
      const int pair[] = {a0, a1};
      const int first[] = {a0};
      const int second[] = {a1};
      const double split = basis_logsq(first, IntensityVector{2.7}) +
                           basis_logsq(second, IntensityVector{5.3});
      CHECK(basis_logsq(pair, L) == doctest::Approx(split).epsilon(1e-13));
      double direct = 0.0;
      for (std::size_t j = 0; j < 2; ++j) {
        const double lj = L[j];
        const int aj = pair[j];
        direct += std::lgamma(lj + aj) - std::lgamma(aj + 1.0) - std::lgamma(lj);
      }
      CHECK(basis_logsq(pair, L) == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("truncation degree: certified minimal box") {
  // L = 1, r = 0.5: tail = 0.25^{M+1} / 0.75 <= 1e-12 first at M = 20.
  const std::vector<double> radius{0.5};
  const DegreeBox box = truncation_degree(IntensityVector{1.0}, radius, 1e-12);
  REQUIRE(box.dim() == 1);
  CHECK(box.degrees[0] == 20);

  const DegreeBox tighter = truncation_degree(IntensityVector{1.0}, radius, 1e-15);
  CHECK(tighter.degrees[0] > box.degrees[0]);

  // The certified bound actually dominates the true tail, and the box is the
  // first one whose bound clears the tolerance.
  const IntensityVector L{4.0};
  const std::vector<double> r{0.5};
  const auto table = BasisCoefficientTable::certified(L, r, 1e-12);
  CHECK(table->tail_variance_bound() >= 0.0);
  CHECK(table->tail_variance_bound() <= 1e-12);
  const PolydiskPoint edge({Complex(0.5, 0.0)});
  const double true_tail =
      covariance(edge, edge, L).real() -
      covariance_series(edge, edge, L, table->box().degrees).real();
  CHECK(true_tail >= -1e-18);
  CHECK(true_tail <= table->tail_variance_bound() * (1.0 + 1e-9) + 1e-18);

  DegreeBox smaller = table->box();
  REQUIRE(smaller.degrees[0] > 0);
  smaller.degrees[0] -= 1;
  const auto trimmed = BasisCoefficientTable::with_box(L, smaller, r);
  CHECK(trimmed->tail_variance_bound() > 1e-12);

  CHECK_THROWS_AS(truncation_degree(IntensityVector{2.0}, std::vector<double>{0.99}, 1e-300),
                  numerical_error);
}

TEST_CASE("sample draws: determinism and box-independent streams") {
  const std::vector<double> radius{0.6};
  const auto table = BasisCoefficientTable::certified(IntensityVector{3.0}, radius, 1e-12);
  const GafSample first = draw_sample(table, 42, 7);
  const GafSample second = draw_sample(table, 42, 7);
  CHECK(first.a == second.a);
  CHECK(first.coeff == second.coeff);
  const GafSample other_trial = draw_sample(table, 42, 8);
  CHECK(first.a != other_trial.a);

  // Enlarging the box preserves the gaussians of the shared multi-indices.
  DegreeBox larger = table->box();
  larger.degrees[0] += 5;
  const auto wide = BasisCoefficientTable::with_box(IntensityVector{3.0}, larger, radius);
  const GafSample extended = draw_sample(wide, 42, 7);
  for (std::size_t i = 0; i < first.a.size(); ++i) CHECK(first.a[i] == extended.a[i]);
}

TEST_CASE("evaluation: nested horner against the naive sum") {
  const std::vector<double> radius{0.6};
  const auto table = BasisCoefficientTable::certified(IntensityVector{3.0}, radius, 1e-12);
  const GafSample s = draw_sample(table, 9, 0);
  CHECK(evaluate(s, PolydiskPoint::origin(1)) == s.coeff[0]);
  for (std::uint64_t t = 0; t < 30; ++t) {
    const auto u = uniform_pair(10, t, 0);
    const Complex z = std::polar(0.6 * std::sqrt(u[1]), 6.28318 * u[0]);
    Complex naive{0.0, 0.0};
    for (std::size_t k = s.coeff.size(); k-- > 0;) naive = naive * z + s.coeff[k];
    const Complex fast = evaluate(s, PolydiskPoint({z}));
    CHECK(std::abs(fast - naive) <= 1e-12 * (1.0 + std::abs(naive)));
  }
  CHECK_THROWS_AS(evaluate(s, PolydiskPoint({Complex(0.7, 0.0)})), std::domain_error);
}

TEST_CASE("certified truncation: enlarging the box moves values below the tail budget") {
  const std::vector<double> radius{0.55};
  const IntensityVector L{5.0};
  const auto table = BasisCoefficientTable::certified(L, radius, 1e-10);
  DegreeBox larger = table->box();
  larger.degrees[0] += 10;
  const auto wide = BasisCoefficientTable::with_box(L, larger, radius);
  const double budget = 10.0 * std::sqrt(table->tail_variance_bound());
  const PolydiskPoint z({Complex(0.55, 0.0)});
  int within = 0;
  const int trials = 400;
  for (int t = 0; t < trials; ++t) {
    const GafSample narrow = draw_sample(table, 77, static_cast<std::uint64_t>(t));
    const GafSample extended = draw_sample(wide, 77, static_cast<std::uint64_t>(t));
    if (std::abs(evaluate(extended, z) - evaluate(narrow, z)) <= budget) ++within;
  }
  CHECK(within >= 396);  // 99% of trials
}

TEST_CASE("empirical pointwise covariance matches the kernel") {
  const std::vector<double> radius{0.6};
  const IntensityVector L{3.0};
  const auto table = BasisCoefficientTable::certified(L, radius, 1e-12);
  const PolydiskPoint z({Complex(0.35, 0.2)});
  const PolydiskPoint w({Complex(-0.4, 0.1)});
  const std::uint64_t trials = 100000;
  Complex acc{0.0, 0.0};
  double acc_sq = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const GafSample s = draw_sample(table, 101, t);
    const Complex product = evaluate(s, z) * std::conj(evaluate(s, w));
    acc += product;
    acc_sq += std::norm(product);
  }
  const double inv = 1.0 / static_cast<double>(trials);
  const Complex mean = acc * inv;
  const Complex exact = covariance(z, w, L);
  // Conservative per-component standard error from the sample itself.
  const double se = std::sqrt(std::max(acc_sq * inv - std::norm(mean), 0.0) * inv);
  CHECK(std::abs(mean.real() - exact.real()) <= 3.0 * se);
  CHECK(std::abs(mean.imag() - exact.imag()) <= 3.0 * se);
}

TEST_CASE("log-normalized modulus: identity, zero sample, distributional invariance") {
  const std::vector<double> radius{0.6};
  const IntensityVector L{4.0};
  const auto table = BasisCoefficientTable::certified(L, radius, 1e-12);
  const GafSample s = draw_sample(table, 55, 3);
  const PolydiskPoint z({Complex(0.3, -0.2)});
  const double direct = std::log(std::norm(evaluate(s, z))) + 4.0 * std::log1p(-std::norm(z[0]));
  CHECK(log_normalized_sq(s, z) == doctest::Approx(direct).epsilon(1e-12));

  GafSample silent = s;
  for (auto& c : silent.coeff) c = Complex{0.0, 0.0};
  CHECK(std::isinf(log_normalized_sq(silent, z)));
  CHECK(log_normalized_sq(silent, z) < 0.0);

  // log |f-hat(0)|^2 = log |a_0|^2 with |a_0|^2 ~ Exp(1): mean is minus the
  // Euler-Mascheroni constant, and the law at any other point is the same.
  const std::uint64_t trials = 10000;
  std::vector<double> at_origin(trials), at_w(trials);
  const PolydiskPoint origin = PolydiskPoint::origin(1);
  const PolydiskPoint shifted({Complex(0.4, 0.0)});
  double mean_origin = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    at_origin[t] = log_normalized_sq(draw_sample(table, 60, t), origin);
    at_w[t] = log_normalized_sq(draw_sample(table, 61, t), shifted);
    mean_origin += at_origin[t];
  }
  mean_origin /= static_cast<double>(trials);
  CHECK(std::abs(mean_origin + 0.57721566490153286) < 0.055);  // ~4.3 standard errors
  const KsResult ks = ks_two_sample(at_origin, at_w);
  CHECK(ks.p_value > 0.01);
}
