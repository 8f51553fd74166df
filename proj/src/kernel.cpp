#include "polygaf/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace polygaf {

namespace {

constexpr double kPiSqOver6 = std::numbers::pi * std::numbers::pi / 6.0;

void check_dims(const PolydiskPoint& z, const PolydiskPoint& w, const IntensityVector& L,
                const char* who) {
  if (z.dim() != w.dim() || z.dim() != L.dim()) {
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
  }
}

// Series sum_{m>=1} x^m / m^2 for x in [0, 1/2]; converges geometrically.
double dilog_series(double x) {
  double sum = 0.0;
  double power = x;
  for (int m = 1; m <= 64; ++m) {
    const double term = power / (static_cast<double>(m) * m);
    sum += term;
    if (term < 1e-18 * (sum + 1e-300)) break;
    power *= x;
  }
  return sum;
}

}  // namespace

Complex covariance(const PolydiskPoint& z, const PolydiskPoint& w, const IntensityVector& L) {
  check_dims(z, w, L, "covariance");
  Complex log_sum(0.0, 0.0);
  for (std::size_t j = 0; j < z.dim(); ++j) {
    log_sum -= L[j] * std::log(1.0 - z[j] * std::conj(w[j]));
  }
  return std::exp(log_sum);
}

Complex covariance_series(const PolydiskPoint& z, const PolydiskPoint& w,
                          const IntensityVector& L, std::span<const int> maxdeg) {
  check_dims(z, w, L, "covariance_series");
  if (maxdeg.size() != z.dim()) {
    throw std::invalid_argument("covariance_series: maxdeg dimension mismatch");
  }
  // Accumulated in extended precision: near x = -|x| the terms peak orders of
  // magnitude above the sum, and the cancellation would otherwise cap the
  // attainable relative accuracy near 1e-9 for |x| close to 1.
  std::complex<long double> total(1.0L, 0.0L);
  for (std::size_t j = 0; j < z.dim(); ++j) {
    const std::complex<long double> x(z[j].real(), z[j].imag());
    const std::complex<long double> xw =
        x * std::complex<long double>(w[j].real(), -w[j].imag());
    // c_k^2 = Gamma(L+k) / (k! Gamma(L)); c_{k+1}^2 = c_k^2 (L+k)/(k+1).
    std::complex<long double> sum(0.0L, 0.0L);
    std::complex<long double> term(1.0L, 0.0L);
    const long double intensity = static_cast<long double>(L[j]);
    for (int k = 0; k <= maxdeg[j]; ++k) {
      sum += term;
      term *= xw * ((intensity + k) / (k + 1.0L));
    }
    total *= sum;
  }
  return Complex(static_cast<double>(total.real()), static_cast<double>(total.imag()));
}

Complex covariance_series(const PolydiskPoint& z, const PolydiskPoint& w,
                          const IntensityVector& L, int maxdeg) {
  std::vector<int> box(z.dim(), maxdeg);
  return covariance_series(z, w, L, box);
}

Complex normalized_kernel(const PolydiskPoint& z, const PolydiskPoint& w,
                          const IntensityVector& L) {
  check_dims(z, w, L, "normalized_kernel");
  Complex log_sum(0.0, 0.0);
  for (std::size_t j = 0; j < z.dim(); ++j) {
    log_sum += 0.5 * L[j] * (std::log1p(-std::norm(z[j])) + std::log1p(-std::norm(w[j])));
    log_sum -= L[j] * std::log(1.0 - std::conj(z[j]) * w[j]);
  }
  return std::exp(log_sum);
}

double normalized_kernel_abs_sq(const PolydiskPoint& z, const PolydiskPoint& w,
                                const IntensityVector& L) {
  check_dims(z, w, L, "normalized_kernel_abs_sq");
  double log_sum = 0.0;
  for (std::size_t j = 0; j < z.dim(); ++j) {
    log_sum += L[j] * (std::log1p(-std::norm(z[j])) + std::log1p(-std::norm(w[j])) -
                       std::log(std::norm(1.0 - std::conj(z[j]) * w[j])));
  }
  return std::exp(log_sum);
}

double dilog(double x) {
  // Tolerate tiny negative / >1 floating noise from |theta|^2 computations.
  if (x < -1e-12 || x > 1.0 + 1e-12) {
    throw std::domain_error("dilog: argument outside [0, 1]");
  }
  x = std::clamp(x, 0.0, 1.0);
  if (1.0 - x < 1e-16) return kPiSqOver6;
  if (x > 0.5) {
    return kPiSqOver6 - std::log(x) * std::log1p(-x) - dilog_series(1.0 - x);
  }
  return dilog_series(x);
}

double log_covariance(const PolydiskPoint& z, const PolydiskPoint& w, const IntensityVector& L) {
  return dilog(normalized_kernel_abs_sq(z, w, L));
}

}  // namespace polygaf
