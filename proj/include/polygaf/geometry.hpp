#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "polygaf/common.hpp"

namespace polygaf {

// Quantities on the polydisk degenerate as |z_j| -> 1, so construction rejects
// coordinates beyond this strict interior bound.
inline constexpr double kCoordModulusCap = 1.0 - 1e-12;

// A point of the open unit polydisk D^n.
class PolydiskPoint {
 public:
  explicit PolydiskPoint(std::vector<Complex> coords);
  static PolydiskPoint origin(std::size_t n);

  std::size_t dim() const { return coords_.size(); }
  const Complex& operator[](std::size_t j) const { return coords_[j]; }
  const std::vector<Complex>& coords() const { return coords_; }
  std::span<const Complex> span() const { return coords_; }

 private:
  std::vector<Complex> coords_;
};

// Per-coordinate intensity vector L = (L_1, ..., L_n), all entries > 0.
class IntensityVector {
 public:
  explicit IntensityVector(std::vector<double> values);
  IntensityVector(std::initializer_list<double> values)
      : IntensityVector(std::vector<double>(values)) {}

  std::size_t dim() const { return values_.size(); }
  double operator[](std::size_t j) const { return values_[j]; }
  const std::vector<double>& values() const { return values_; }
  double sum() const;
  double product() const;

 private:
  std::vector<double> values_;
};

// Coordinatewise Moebius automorphism z_j -> e^{i theta_j} (z_j - w_j) / (1 - conj(w_j) z_j).
struct MoebiusAutomorphism {
  PolydiskPoint center;        // w; maps to the origin
  std::vector<double> phases;  // theta_j; empty means all zero

  explicit MoebiusAutomorphism(PolydiskPoint w) : center(std::move(w)) {}
  MoebiusAutomorphism(PolydiskPoint w, std::vector<double> theta);
};

// Pseudo-hyperbolic polydisk E(w, r) = { z : rho(z_j, w_j) < r_j for all j }.
struct PseudoHyperbolicPolydisk {
  PolydiskPoint center;
  std::vector<double> radii;  // each in (0,1)

  PseudoHyperbolicPolydisk(PolydiskPoint w, std::vector<double> r);
};

// rho(zeta, xi) = |zeta - xi| / |1 - conj(zeta) xi|, the Moebius-invariant
// pseudo-distance on the unit disk. Rejects |zeta| >= 1 or |xi| >= 1.
double pseudo_distance(Complex zeta, Complex xi);

PolydiskPoint apply_automorphism(const MoebiusAutomorphism& map, const PolydiskPoint& z);

// Density of the invariant measure nu against Lebesgue measure:
// 1 / (pi^n prod_j (1 - |z_j|^2)^2).
double invariant_density(const PolydiskPoint& z);

// nu(E(w, r)) = prod_j r_j^2 / (1 - r_j^2); independent of the center.
double nu_volume(const PseudoHyperbolicPolydisk& e);

// Coefficients of the first-intensity form: (L_j / (1 - |z_j|^2)^2)_j.
std::vector<double> intensity_form_coefficients(const PolydiskPoint& z,
                                                const IntensityVector& L);

// The Euclidean disk underlying a 1-D pseudo-hyperbolic disk E(w, r):
// center w (1-r^2) / (1 - r^2 |w|^2), radius r (1-|w|^2) / (1 - r^2 |w|^2).
struct EuclideanDisk {
  Complex center;
  double radius;
};
EuclideanDisk euclidean_disk(Complex w, double r);

}  // namespace polygaf
