#pragma once

#include <complex>
#include <stdexcept>

namespace polygaf {

inline constexpr const char* kVersionString = "polygaf 0.1.0";

using Complex = std::complex<double>;

// Thrown when an iterative numeric routine (quadrature, root finder, winding
// count, series summation) reaches its cap without meeting its tolerance.
// The CLI maps it to exit code 3.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace polygaf
