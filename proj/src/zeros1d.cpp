#include "polygaf/zeros1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace polygaf {

namespace {

constexpr double kResidualTol = 1e-8;
constexpr int kMaxSweeps = 500;

struct PolyEval {
  Complex p;
  Complex dp;
  double scale;  // sum_k |c_k| |z|^k, the natural residual scale
};

PolyEval eval_with_derivative(std::span<const Complex> c, Complex z) {
  const std::size_t d = c.size() - 1;
  const double az = std::abs(z);
  PolyEval e{c[d], Complex(0.0, 0.0), std::abs(c[d])};
  for (std::size_t k = d; k-- > 0;) {
    e.dp = e.dp * z + e.p;
    e.p = e.p * z + c[k];
    e.scale = e.scale * az + std::abs(c[k]);
  }
  return e;
}

// Initial guesses from the Newton polygon: the upper convex hull of
// (k, log|c_k|) splits the degree range into groups whose root moduli are
// approximated by the hull's segment slopes.
std::vector<Complex> initial_guesses(std::span<const Complex> c) {
  const std::size_t d = c.size() - 1;
  std::vector<std::pair<double, double>> hull;  // (k, log|c_k|)
  for (std::size_t k = 0; k <= d; ++k) {
    const double a = std::abs(c[k]);
    if (a == 0.0) continue;
    const std::pair<double, double> pt{static_cast<double>(k), std::log(a)};
    while (hull.size() >= 2) {
      const auto& p1 = hull[hull.size() - 2];
      const auto& p2 = hull[hull.size() - 1];
      const double cross = (p2.first - p1.first) * (pt.second - p1.second) -
                           (p2.second - p1.second) * (pt.first - p1.first);
      if (cross >= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(pt);
  }
  std::vector<Complex> guess;
  guess.reserve(d);
  for (std::size_t g = 0; g + 1 < hull.size(); ++g) {
    const int m = static_cast<int>(hull[g + 1].first - hull[g].first);
    double radius = std::exp((hull[g].second - hull[g + 1].second) / m);
    radius = std::clamp(radius, 1e-12, 1e12);
    for (int j = 0; j < m; ++j) {
      const double theta =
          2.0 * std::numbers::pi * (j + 0.5) / m + 0.401 * (static_cast<double>(g) + 1.0);
      guess.push_back(std::polar(radius, theta));
    }
  }
  return guess;
}

}  // namespace

std::vector<Complex> polynomial_roots(std::span<const Complex> coeff) {
  std::size_t top = coeff.size();
  while (top > 0 && coeff[top - 1] == Complex(0.0, 0.0)) --top;
  if (top == 0) throw numerical_error("polynomial_roots: zero polynomial");
  std::size_t low = 0;
  while (coeff[low] == Complex(0.0, 0.0)) ++low;  // roots at the origin
  std::vector<Complex> roots(low, Complex(0.0, 0.0));
  if (top - low > 1) {
    // Scale so the largest coefficient has unit modulus.
    std::vector<Complex> c(coeff.begin() + static_cast<std::ptrdiff_t>(low),
                           coeff.begin() + static_cast<std::ptrdiff_t>(top));
    double cmax = 0.0;
    for (const Complex& v : c) cmax = std::max(cmax, std::abs(v));
    for (Complex& v : c) v /= cmax;
    std::vector<Complex> z = initial_guesses(c);
    const std::size_t d = z.size();
    bool done = false;
    for (int sweep = 0; sweep < kMaxSweeps && !done; ++sweep) {
      done = true;
      for (std::size_t i = 0; i < d; ++i) {
        const PolyEval e = eval_with_derivative(c, z[i]);
        if (std::abs(e.p) <= kResidualTol * e.scale) continue;
        done = false;
        if (!(std::abs(e.dp) > 0.0) || !std::isfinite(std::abs(e.dp))) {
          z[i] += Complex(1e-6, 1e-6) * (1.0 + std::abs(z[i]));
          continue;
        }
        const Complex newton = e.p / e.dp;
        Complex repulsion(0.0, 0.0);
        for (std::size_t j = 0; j < d; ++j) {
          if (j == i) continue;
          const Complex diff = z[i] - z[j];
          if (diff == Complex(0.0, 0.0)) {
            z[i] += Complex(5e-7, -5e-7) * (1.0 + std::abs(z[i]));
            repulsion = Complex(0.0, 0.0);
            break;
          }
          repulsion += 1.0 / diff;
        }
        const Complex denom = 1.0 - newton * repulsion;
        z[i] -= denom == Complex(0.0, 0.0) ? newton : newton / denom;
      }
    }
    if (!done) throw numerical_error("polynomial_roots: iteration did not converge");
    roots.insert(roots.end(), z.begin(), z.end());
  }
  std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

namespace {

void check_univariate_radius(const GafSample& s, double rho, const char* what) {
  if (s.dim() != 1) throw std::invalid_argument(std::string(what) + ": sample must be univariate");
  if (!(rho > 0.0) || rho > s.eval_radius()[0] + 1e-9)
    throw std::invalid_argument(std::string(what) + ": radius outside the certified range");
}

}  // namespace

std::vector<Complex> zeros_in_disk(const GafSample& s, double rho) {
  check_univariate_radius(s, rho, "zeros_in_disk");
  std::vector<Complex> all = polynomial_roots(s.coeff);
  std::vector<Complex> inside;
  for (const Complex& z : all)
    if (std::abs(z) < rho) inside.push_back(z);
  return inside;
}

int count_zeros(const GafSample& s, double rho) {
  return static_cast<int>(zeros_in_disk(s, rho).size());
}

namespace {

// Winding number of f over |z| = rho with the contour minimum of |f| reported
// back for certification; node counts double until the estimate rounds to the
// same integer twice with margin 0.25.
int winding_with_min(const GafSample& s, double rho, double* min_abs_out) {
  const std::span<const Complex> c(s.coeff);
  for (const double pert : {0.0, 1e-6, -1e-6, 2e-6}) {
    const double rr = rho + pert;
    if (!(rr > 0.0) || rr > s.eval_radius()[0] + 1e-12) continue;
    bool have_prev = false;
    long prev_round = 0;
    for (int n = 64; n <= 16384; n *= 2) {
      double min_abs = std::numeric_limits<double>::infinity();
      double max_abs = 0.0;
      double winding = 0.0;
      bool degenerate = false;
      for (int k = 0; k < n; ++k) {
        const double theta = (k + 0.5) * 2.0 * std::numbers::pi / n;
        const Complex z = std::polar(rr, theta);
        const PolyEval e = eval_with_derivative(c, z);
        const double ap = std::abs(e.p);
        min_abs = std::min(min_abs, ap);
        max_abs = std::max(max_abs, ap);
        if (ap == 0.0) {
          degenerate = true;
          break;
        }
        winding += (e.dp / e.p * z).real();
      }
      if (degenerate || min_abs <= 1e-9 * max_abs) break;  // try the next perturbation
      winding /= n;
      const long rounded = std::lround(winding);
      const bool locked = rounded >= 0 && std::abs(winding - rounded) <= 0.25;
      if (locked && have_prev && rounded == prev_round) {
        if (min_abs_out) *min_abs_out = min_abs;
        return static_cast<int>(rounded);
      }
      have_prev = locked;
      prev_round = rounded;
    }
  }
  throw numerical_error("winding_count: contour count did not stabilize");
}

}  // namespace

int winding_count(const GafSample& s, double rho) {
  check_univariate_radius(s, rho, "winding_count");
  return winding_with_min(s, rho, nullptr);
}

HoleStatus hole_test(const GafSample& s, double rho, double kappa) {
  check_univariate_radius(s, rho, "hole_test");
  double min_abs = 0.0;
  int w = 0;
  try {
    w = winding_with_min(s, rho, &min_abs);
  } catch (const numerical_error&) {
    return HoleStatus::kUncertain;
  }
  if (min_abs <= kappa * std::sqrt(s.tail_variance_bound())) return HoleStatus::kUncertain;
  return w == 0 ? HoleStatus::kHole : HoleStatus::kNotHole;
}

}  // namespace polygaf
