#include "polygaf/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace polygaf {

GaussLegendreRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  const double mid = 0.5 * (a + b);
  const double halfwidth = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = mid + halfwidth * rule.nodes[static_cast<std::size_t>(i)];
    rule.weights[static_cast<std::size_t>(i)] *= halfwidth;
  }
  return rule;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int n) {
  const GaussLegendreRule rule = gauss_legendre(n, a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
  return acc;
}

double adaptive_gl(const std::function<double(double)>& f, double a, double b, double rtol,
                   double atol, int n0, int n_max) {
  double prev = integrate_gl(f, a, b, n0);
  for (int n = 2 * n0; n <= n_max; n *= 2) {
    const double cur = integrate_gl(f, a, b, n);
    if (std::abs(cur - prev) <= rtol * std::abs(cur) + atol) return cur;
    prev = cur;
  }
  throw numerical_error("adaptive_gl: quadrature did not converge");
}

CoordinateRule coordinate_polar_rule(double rho, int n_rad, int n_ang) {
  if (!(rho > 0.0) || rho >= 1.0)
    throw std::invalid_argument("coordinate_polar_rule: radius must lie in (0, 1)");
  if (n_rad < 1 || n_ang < 1)
    throw std::invalid_argument("coordinate_polar_rule: node counts must be positive");
  const GaussLegendreRule radial = gauss_legendre(n_rad, 0.0, rho);
  CoordinateRule rule;
  rule.n_rad = n_rad;
  rule.n_ang = n_ang;
  rule.nodes.reserve(static_cast<std::size_t>(n_rad) * static_cast<std::size_t>(n_ang));
  rule.weights.reserve(rule.nodes.capacity());
  const double dtheta = 2.0 * std::numbers::pi / n_ang;
  for (int i = 0; i < n_rad; ++i) {
    const double r = radial.nodes[static_cast<std::size_t>(i)];
    const double one_minus = 1.0 - r * r;
    const double radial_weight =
        radial.weights[static_cast<std::size_t>(i)] * r / (std::numbers::pi * one_minus * one_minus);
    for (int k = 0; k < n_ang; ++k) {
      const double theta = (k + 0.5) * dtheta;
      rule.nodes.push_back(std::polar(r, theta));
      rule.weights.push_back(radial_weight * dtheta);
    }
  }
  return rule;
}

}  // namespace polygaf
