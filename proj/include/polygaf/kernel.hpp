#pragma once

#include <span>
#include <vector>

#include "polygaf/geometry.hpp"

namespace polygaf {

// Covariance kernel K_L(z,w) = prod_j (1 - z_j conj(w_j))^{-L_j}.
// Accumulated in log space (principal branch; 1 - z conj(w) stays in the right
// half-plane since |z conj(w)| < 1), so large L_j cannot overflow.
Complex covariance(const PolydiskPoint& z, const PolydiskPoint& w, const IntensityVector& L);

// Partial sum of the coefficient series of K_L over the box alpha <= maxdeg.
// The series factors per coordinate, so the box sum is a product of 1-D sums.
Complex covariance_series(const PolydiskPoint& z, const PolydiskPoint& w,
                          const IntensityVector& L, std::span<const int> maxdeg);
Complex covariance_series(const PolydiskPoint& z, const PolydiskPoint& w,
                          const IntensityVector& L, int maxdeg);

// Normalized kernel
//   theta_L(z,w) = prod_j (1-|z_j|^2)^{L_j/2} (1-|w_j|^2)^{L_j/2} / (1 - conj(z_j) w_j)^{L_j};
// |theta_L| <= 1 with equality on the diagonal.
Complex normalized_kernel(const PolydiskPoint& z, const PolydiskPoint& w,
                          const IntensityVector& L);

// |theta_L(z,w)|^2, computed directly in log space (cheaper and more accurate
// than norm(normalized_kernel(...)) for large L).
double normalized_kernel_abs_sq(const PolydiskPoint& z, const PolydiskPoint& w,
                                const IntensityVector& L);

// Dilogarithm Li_2(x) = sum_{m>=1} x^m / m^2 on [0,1], abs error <= 1e-12.
// Series for x <= 1/2; reflection Li2(x) + Li2(1-x) = pi^2/6 - log(x)log(1-x)
// for x > 1/2; returns pi^2/6 outright when 1 - x < 1e-16.
double dilog(double x);

// rho_L(z,w) = Li_2(|theta_L(z,w)|^2) >= 0.
double log_covariance(const PolydiskPoint& z, const PolydiskPoint& w, const IntensityVector& L);

}  // namespace polygaf
