#pragma once

#include <functional>
#include <span>
#include <vector>

#include "polygaf/common.hpp"

namespace polygaf {

// Gauss-Legendre nodes and weights on [a, b].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

double integrate_gl(const std::function<double(double)>& f, double a, double b, int n);

// Doubles the node count (from n0, up to n_max) until two successive values
// agree to rtol/atol; throws numerical_error if that never happens.
double adaptive_gl(const std::function<double(double)>& f, double a, double b,
                   double rtol = 1e-10, double atol = 0.0, int n0 = 16, int n_max = 1 << 14);

// Quadrature for one polydisk coordinate against the invariant measure:
//   integral_{|z| < rho} g(z) dnu_1(z) ~= sum_i weights[i] g(nodes[i])
// with dnu_1 = dA(z) / (pi (1 - |z|^2)^2). Radial Gauss-Legendre nodes tensor
// midpoint angular nodes (midpoints keep every node strictly inside the disk
// and integrate trigonometric polynomials of degree < n_ang exactly).
struct CoordinateRule {
  std::vector<Complex> nodes;
  std::vector<double> weights;
  int n_rad = 0;
  int n_ang = 0;
};

CoordinateRule coordinate_polar_rule(double rho, int n_rad, int n_ang);

}  // namespace polygaf
