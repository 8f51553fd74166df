#include "polygaf/testform.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace polygaf {

namespace {

constexpr double kFdStep = 1e-4;

TestForm from_radial(std::vector<TestForm::RadialProfile> profiles) {
  TestForm form;
  form.n = profiles.size();
  form.radial = std::move(profiles);
  form.support_box.reserve(form.n);
  for (const auto& p : form.radial) form.support_box.push_back(p.support_radius);
  const auto radial = form.radial;  // owned copy for the closures
  form.psi = [radial](std::span<const Complex> z) {
    double acc = 1.0;
    for (std::size_t j = 0; j < radial.size(); ++j) acc *= radial[j].g(std::norm(z[j]));
    return acc;
  };
  form.mixed_second = [radial](std::span<const Complex> z, std::size_t j) {
    double acc = radial[j].lap(std::norm(z[j]));
    for (std::size_t k = 0; k < radial.size(); ++k)
      if (k != j) acc *= radial[k].g(std::norm(z[k]));
    return acc;
  };
  return form;
}

void check_radii(const std::vector<double>& R) {
  if (R.empty()) throw std::invalid_argument("test form: need at least one coordinate");
  for (double r : R)
    if (!(r > 0.0) || r >= 1.0)
      throw std::invalid_argument("test form: support radius must lie in (0, 1)");
}

}  // namespace

TestForm polynomial_bump(std::vector<double> R) {
  check_radii(R);
  std::vector<TestForm::RadialProfile> profiles;
  profiles.reserve(R.size());
  for (double radius : R) {
    const double r_sq = radius * radius;
    TestForm::RadialProfile p;
    p.support_radius = radius;
    p.g = [r_sq](double t) {
      const double tau = 1.0 - t / r_sq;
      return tau > 0.0 ? tau * tau : 0.0;
    };
    // For g = G(t): d^2 g / dzeta dzeta-bar = G'(t) + t G''(t).
    p.lap = [r_sq](double t) {
      const double tau = 1.0 - t / r_sq;
      if (tau <= 0.0) return 0.0;
      const double gp = -2.0 * tau / r_sq;
      const double gpp = 2.0 / (r_sq * r_sq);
      return gp + t * gpp;
    };
    profiles.push_back(std::move(p));
  }
  return from_radial(std::move(profiles));
}

TestForm smooth_bump(std::vector<double> R) {
  check_radii(R);
  std::vector<TestForm::RadialProfile> profiles;
  profiles.reserve(R.size());
  for (double radius : R) {
    const double r_sq = radius * radius;
    TestForm::RadialProfile p;
    p.support_radius = radius;
    p.g = [r_sq](double t) {
      const double tau = 1.0 - t / r_sq;
      return tau > 0.0 ? std::exp(1.0 - 1.0 / tau) : 0.0;
    };
    p.lap = [r_sq](double t) {
      const double tau = 1.0 - t / r_sq;
      if (tau <= 1e-12) return 0.0;  // underflows well before this anyway
      const double g = std::exp(1.0 - 1.0 / tau);
      const double tau2 = tau * tau;
      const double gp = -g / (tau2 * r_sq);
      const double gpp = g * (1.0 / (tau2 * tau2) - 2.0 / (tau2 * tau)) / (r_sq * r_sq);
      return gp + t * gpp;
    };
    profiles.push_back(std::move(p));
  }
  return from_radial(std::move(profiles));
}

double psi_value(const TestForm& form, std::span<const Complex> z) {
  if (z.size() != form.n) throw std::invalid_argument("psi_value: dimension mismatch");
  return form.psi(z);
}

double mixed_second_value(const TestForm& form, std::span<const Complex> z, std::size_t j) {
  if (z.size() != form.n || j >= form.n)
    throw std::invalid_argument("mixed_second_value: dimension mismatch");
  if (form.mixed_second) return form.mixed_second(z, j);
  std::vector<Complex> w(z.begin(), z.end());
  const Complex center = z[j];
  double acc = -4.0 * form.psi(w);
  w[j] = center + kFdStep;
  acc += form.psi(w);
  w[j] = center - kFdStep;
  acc += form.psi(w);
  w[j] = center + Complex(0.0, kFdStep);
  acc += form.psi(w);
  w[j] = center - Complex(0.0, kFdStep);
  acc += form.psi(w);
  return acc / (4.0 * kFdStep * kFdStep);
}

double dphi(const TestForm& form, std::span<const Complex> z) {
  double acc = 0.0;
  for (std::size_t j = 0; j < form.n; ++j) {
    const double one_minus = 1.0 - std::norm(z[j]);
    acc += one_minus * one_minus * mixed_second_value(form, z, j);
  }
  return acc;
}

double dphi(const TestForm& form, const PolydiskPoint& z) {
  return dphi(form, std::span<const Complex>(z.coords()));
}

TestForm composed_with(const TestForm& form, const MoebiusAutomorphism& phi) {
  if (phi.center.dim() != form.n) throw std::invalid_argument("composed_with: dimension mismatch");
  TestForm out;
  out.n = form.n;
  out.support_box.reserve(form.n);
  for (std::size_t j = 0; j < form.n; ++j) {
    const double c = std::abs(phi.center[j]);
    const double r = form.support_box[j];
    out.support_box.push_back((c + r) / (1.0 + c * r));
  }
  TestForm inner = form;
  out.psi = [inner, phi](std::span<const Complex> z) {
    const PolydiskPoint image = apply_automorphism(phi, PolydiskPoint(std::vector<Complex>(z.begin(), z.end())));
    return inner.psi(std::span<const Complex>(image.coords()));
  };
  out.mixed_second = nullptr;  // finite differences
  return out;
}

TestForm coordinate_swapped(const TestForm& form) {
  if (form.n != 2) throw std::invalid_argument("coordinate_swapped: needs n = 2");
  TestForm out = form;
  std::swap(out.support_box[0], out.support_box[1]);
  if (form.separable_radial()) std::swap(out.radial[0], out.radial[1]);
  TestForm inner = form;
  out.psi = [inner](std::span<const Complex> z) {
    const Complex swapped[2] = {z[1], z[0]};
    return inner.psi(std::span<const Complex>(swapped, 2));
  };
  if (form.mixed_second) {
    out.mixed_second = [inner](std::span<const Complex> z, std::size_t j) {
      const Complex swapped[2] = {z[1], z[0]};
      return inner.mixed_second(std::span<const Complex>(swapped, 2), 1 - j);
    };
  }
  return out;
}

}  // namespace polygaf
