#pragma once

#include <span>
#include <vector>

#include "polygaf/common.hpp"
#include "polygaf/sampler.hpp"

namespace polygaf {

// All roots of sum_k coeff[k] z^k (degree = highest index with a nonzero
// coefficient), by Aberth-Ehrlich iteration from Newton-polygon initial
// guesses. Deterministic: roots are returned sorted by (re, im).
std::vector<Complex> polynomial_roots(std::span<const Complex> coeff);

// Zeros of a univariate sample inside |z| < rho (rho must not exceed the
// certified radius).
std::vector<Complex> zeros_in_disk(const GafSample& s, double rho);
int count_zeros(const GafSample& s, double rho);

// Argument-principle count of zeros in |z| < rho from contour data alone
// (midpoint trapezoid on |z| = rho, node count doubled until the winding
// number locks onto an integer twice in a row). Independent of
// polynomial_roots. Nearly vanishing contour values trigger tiny radius
// perturbations; persistent failure raises numerical_error.
int winding_count(const GafSample& s, double rho);

enum class HoleStatus { kHole, kNotHole, kUncertain };

// Decides whether the sample is zero-free on |z| < rho. The verdict is only
// issued when the minimum of |f| on the contour clears kappa times the
// truncation tail's standard deviation; otherwise kUncertain.
HoleStatus hole_test(const GafSample& s, double rho, double kappa = 10.0);

}  // namespace polygaf
