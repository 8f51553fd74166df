#pragma once

#include <functional>
#include <span>
#include <vector>

#include "polygaf/geometry.hpp"

namespace polygaf {

// Smooth compactly supported weight psi on the polydisk, standing in for the
// positive form phi = psi omega^{n-1}/(n-1)!. Carries its mixed second
// derivatives (falling back to central differences when no analytic callable
// is supplied) and, when psi is a product of radial profiles, the per-
// coordinate structure that the fast quadrature paths exploit.
struct TestForm {
  // Radial factor g(t) of one coordinate as a function of t = |zeta|^2,
  // together with d^2 g / dzeta dzeta-bar expressed through t.
  struct RadialProfile {
    std::function<double(double)> g;
    std::function<double(double)> lap;
    double support_radius = 0.0;
  };

  std::size_t n = 0;
  std::function<double(std::span<const Complex>)> psi;
  // (z, j) -> d^2 psi / dz_j dz_j-bar at z; null means finite differences.
  std::function<double(std::span<const Complex>, std::size_t)> mixed_second;
  std::vector<double> support_box;
  std::vector<RadialProfile> radial;  // size n when separable-radial, else empty

  bool separable_radial() const { return radial.size() == n && n > 0; }
};

// (1 - t/R^2)^2 per coordinate: C^1 with piecewise-smooth second derivative
// (fast default; the kink sits exactly on the support boundary).
TestForm polynomial_bump(std::vector<double> R);

// exp(1 - 1/(1 - t/R^2)) per coordinate: C-infinity, used whenever
// second-derivative regularity matters.
TestForm smooth_bump(std::vector<double> R);

double psi_value(const TestForm& form, std::span<const Complex> z);
// Analytic callable if present, otherwise the five-point Laplacian stencil
// with step 1e-4 (d^2/dz dz-bar = Laplacian / 4).
double mixed_second_value(const TestForm& form, std::span<const Complex> z, std::size_t j);

// D-phi(z) = sum_j (1 - |z_j|^2)^2 d^2 psi / dz_j dz_j-bar (z).
double dphi(const TestForm& form, std::span<const Complex> z);
double dphi(const TestForm& form, const PolydiskPoint& z);

// psi composed with the automorphism (psi o phi); derivatives by finite
// differences, support enlarged to the preimage of the support ball.
TestForm composed_with(const TestForm& form, const MoebiusAutomorphism& phi);

// psi with the roles of the two coordinates exchanged (n = 2 only).
TestForm coordinate_swapped(const TestForm& form);

}  // namespace polygaf
