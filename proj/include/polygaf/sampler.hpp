#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "polygaf/geometry.hpp"

namespace polygaf {

// Per-coordinate maximum degrees M = (M_1, ..., M_n), inclusive.
struct DegreeBox {
  std::vector<int> degrees;

  std::size_t dim() const { return degrees.size(); }
  std::size_t flat_size() const;
};

// log(c_alpha^2) with c_alpha^2 = prod_j Gamma(L_j + a_j) / (a_j! Gamma(L_j)).
double basis_logsq(std::span<const int> alpha, const IntensityVector& L);

// Smallest per-coordinate degrees such that the certified tail variance
// K_L(r,r) - sum_{alpha <= M} c_alpha^2 r^{2 alpha} is <= tol. The tail is
// bounded per coordinate by a geometric majorant (positive arithmetic only, so
// tolerances far below the roundoff of K itself remain meaningful) and the
// per-coordinate budgets are combined so the multiplicative total stays <= tol.
DegreeBox truncation_degree(const IntensityVector& L, std::span<const double> eval_radius,
                            double tol, int hard_cap = 5000);

// Reusable per-experiment table of basis coefficients over a degree box,
// certified at a declared evaluation radius.
class BasisCoefficientTable {
 public:
  // Builds the table with the box chosen by truncation_degree(L, r, tol).
  static std::shared_ptr<const BasisCoefficientTable> certified(
      IntensityVector L, std::vector<double> eval_radius, double tol, int hard_cap = 5000);
  // Builds the table over an explicit box (tail bound still certified at r).
  static std::shared_ptr<const BasisCoefficientTable> with_box(
      IntensityVector L, DegreeBox box, std::vector<double> eval_radius);

  const IntensityVector& L() const { return L_; }
  const DegreeBox& box() const { return box_; }
  std::size_t dim() const { return L_.dim(); }
  const std::vector<double>& eval_radius() const { return eval_radius_; }
  double tail_variance_bound() const { return tail_bound_; }
  double logsq(std::size_t flat_index) const { return logsq_[flat_index]; }
  const std::vector<double>& logsq_all() const { return logsq_; }

 private:
  BasisCoefficientTable(IntensityVector L, DegreeBox box, std::vector<double> eval_radius);

  IntensityVector L_;
  DegreeBox box_;
  std::vector<double> eval_radius_;
  std::vector<double> logsq_;  // row-major over the box, last coordinate contiguous
  double tail_bound_;
};

// One truncated GAF realization. Immutable; safe to share across workers.
struct GafSample {
  std::shared_ptr<const BasisCoefficientTable> table;
  std::vector<Complex> a;      // raw i.i.d. N_C(0,1) coefficients
  std::vector<Complex> coeff;  // a_alpha * c_alpha, the evaluation coefficients
  std::uint64_t seed = 0;
  std::uint64_t trial_index = 0;

  std::size_t dim() const { return table->dim(); }
  const IntensityVector& L() const { return table->L(); }
  const DegreeBox& box() const { return table->box(); }
  const std::vector<double>& eval_radius() const { return table->eval_radius(); }
  double tail_variance_bound() const { return table->tail_variance_bound(); }
};

// Canonical box-independent packing of a multi-index into the RNG stream index
// (16 bits per coordinate; requires n <= 4 and all degrees < 65536). A given
// alpha therefore draws the same gaussian under any enclosing degree box.
std::uint64_t coefficient_stream_index(std::span<const int> alpha);

GafSample draw_sample(std::shared_ptr<const BasisCoefficientTable> table, std::uint64_t seed,
                      std::uint64_t trial_index);
GafSample draw_sample(const IntensityVector& L, const DegreeBox& box,
                      std::vector<double> eval_radius, std::uint64_t seed,
                      std::uint64_t trial_index);

// f_L(z) = sum_{alpha <= M} a_alpha c_alpha z^alpha by nested Horner.
// Rejects evaluation outside the certified radius.
Complex evaluate(const GafSample& s, const PolydiskPoint& z);
Complex evaluate(const GafSample& s, std::span<const Complex> z);

// log |f_L(z)|^2 + sum_j L_j log(1 - |z_j|^2); -inf if f_L(z) is exactly 0.
double log_normalized_sq(const GafSample& s, const PolydiskPoint& z);
double log_normalized_sq(const GafSample& s, std::span<const Complex> z);

// Batch evaluation on every node of a list (n=1) or a tensor grid (n=2,
// out[i1 * grid2.size() + i2] = f(grid1[i1], grid2[i2])); the n=2 version uses
// a two-stage Horner so the cost is O(M1 M2 g2 + g1 g2 M1) rather than
// O(g1 g2 M1 M2). No radius check (callers certify their grids up front).
void evaluate_nodes(const GafSample& s, std::span<const Complex> nodes, std::span<Complex> out);
void evaluate_grid2(const GafSample& s, std::span<const Complex> grid1,
                    std::span<const Complex> grid2, std::span<Complex> out);

}  // namespace polygaf
