#include "polygaf/geometry.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace polygaf {

namespace {

void check_interior(const std::vector<Complex>& coords) {
  if (coords.empty()) throw std::invalid_argument("PolydiskPoint: dimension must be >= 1");
  for (const Complex& c : coords) {
    if (!(std::abs(c) <= kCoordModulusCap)) {
      throw std::invalid_argument("PolydiskPoint: coordinate modulus must be < 1 - 1e-12");
    }
  }
}

}  // namespace

PolydiskPoint::PolydiskPoint(std::vector<Complex> coords) : coords_(std::move(coords)) {
  check_interior(coords_);
}

PolydiskPoint PolydiskPoint::origin(std::size_t n) {
  return PolydiskPoint(std::vector<Complex>(n, Complex(0.0, 0.0)));
}

IntensityVector::IntensityVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("IntensityVector: dimension must be >= 1");
  for (double v : values_) {
    if (!(v > 0.0)) throw std::invalid_argument("IntensityVector: intensities must be > 0");
  }
}

double IntensityVector::sum() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

double IntensityVector::product() const {
  double p = 1.0;
  for (double v : values_) p *= v;
  return p;
}

MoebiusAutomorphism::MoebiusAutomorphism(PolydiskPoint w, std::vector<double> theta)
    : center(std::move(w)), phases(std::move(theta)) {
  if (!phases.empty() && phases.size() != center.dim()) {
    throw std::invalid_argument("MoebiusAutomorphism: phase count must match dimension");
  }
}

PseudoHyperbolicPolydisk::PseudoHyperbolicPolydisk(PolydiskPoint w, std::vector<double> r)
    : center(std::move(w)), radii(std::move(r)) {
  if (radii.size() != center.dim()) {
    throw std::invalid_argument("PseudoHyperbolicPolydisk: radius count must match dimension");
  }
  for (double rr : radii) {
    if (!(rr > 0.0 && rr < 1.0)) {
      throw std::invalid_argument("PseudoHyperbolicPolydisk: radii must lie in (0,1)");
    }
  }
}

double pseudo_distance(Complex zeta, Complex xi) {
  if (!(std::abs(zeta) < 1.0) || !(std::abs(xi) < 1.0)) {
    throw std::domain_error("pseudo_distance: arguments must have modulus < 1");
  }
  return std::abs((zeta - xi) / (1.0 - std::conj(zeta) * xi));
}

PolydiskPoint apply_automorphism(const MoebiusAutomorphism& map, const PolydiskPoint& z) {
  const std::size_t n = map.center.dim();
  if (z.dim() != n) throw std::invalid_argument("apply_automorphism: dimension mismatch");
  std::vector<Complex> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex w = map.center[j];
    Complex v = (z[j] - w) / (1.0 - std::conj(w) * z[j]);
    if (!map.phases.empty()) v *= std::polar(1.0, map.phases[j]);
    out[j] = v;
  }
  return PolydiskPoint(std::move(out));
}

double invariant_density(const PolydiskPoint& z) {
  double d = 1.0;
  for (std::size_t j = 0; j < z.dim(); ++j) {
    const double t = 1.0 - std::norm(z[j]);
    d /= std::numbers::pi * t * t;
  }
  return d;
}

double nu_volume(const PseudoHyperbolicPolydisk& e) {
  double v = 1.0;
  for (double r : e.radii) v *= r * r / (1.0 - r * r);
  return v;
}

std::vector<double> intensity_form_coefficients(const PolydiskPoint& z,
                                                const IntensityVector& L) {
  if (z.dim() != L.dim()) {
    throw std::invalid_argument("intensity_form_coefficients: dimension mismatch");
  }
  std::vector<double> out(z.dim());
  for (std::size_t j = 0; j < z.dim(); ++j) {
    const double t = 1.0 - std::norm(z[j]);
    out[j] = L[j] / (t * t);
  }
  return out;
}

EuclideanDisk euclidean_disk(Complex w, double r) {
  const double denom = 1.0 - r * r * std::norm(w);
  return {w * ((1.0 - r * r) / denom), r * (1.0 - std::norm(w)) / denom};
}

}  // namespace polygaf
