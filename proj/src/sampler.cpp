#include "polygaf/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "polygaf/common.hpp"
#include "polygaf/rng.hpp"

namespace polygaf {

namespace {

constexpr double kLogSqUnderflow = -745.0;  // exp() underflows to zero below this
constexpr std::size_t kMaxDim = 4;          // limit of the 16-bit stream packing
constexpr int kMaxDegreePerCoord = 65535;

// One coordinate's worth of the covariance diagonal at radius r:
//   full    = (1 - r^2)^{-L}
//   partial = sum_{k<=M} c_k^2 r^{2k}
//   tail    = certified upper bound on full - partial (positive arithmetic
//             only: remainder terms are summed until negligible relative to
//             their running total, then capped by a geometric majorant).
struct CoordinateTail {
  double full = 1.0;
  double partial = 1.0;
  double tail = 0.0;
};

double term_ratio(double L, double r_sq, int k) { return r_sq * (L + k) / (k + 1.0); }

CoordinateTail coordinate_tail(double L, double r, int M) {
  CoordinateTail out;
  const double r_sq = r * r;
  out.full = std::exp(-L * std::log1p(-r_sq));
  double term = 1.0;  // c_0^2 r^0
  double partial = 0.0;
  for (int k = 0; k <= M; ++k) {
    partial += term;
    term *= term_ratio(L, r_sq, k);
  }
  out.partial = partial;
  // Sum the remainder until it stops moving, then close with a geometric cap.
  double tail = 0.0;
  int k = M + 1;
  while (term > 0.0 && k < M + 200000) {
    tail += term;
    term *= term_ratio(L, r_sq, k);
    ++k;
    double q = std::max(term_ratio(L, r_sq, k), r_sq);
    if (q < 1.0 && term <= tail * 1e-16) {
      tail += term / (1.0 - q);
      term = 0.0;
    }
  }
  if (term > 0.0) throw numerical_error("sampler: tail series failed to converge");
  out.tail = tail;
  return out;
}

// Certified bound on the total tail over the box: with full_j = partial_j +
// tail_j per coordinate, prod full - prod partial accumulates via
//   D_k = full_k D_{k-1} + tail_k * prod_{j<k} partial_j,
// which keeps every operand nonnegative.
double combined_tail(std::span<const CoordinateTail> per_coord) {
  double diff = 0.0;
  double partial_prod = 1.0;
  for (const auto& c : per_coord) {
    diff = c.full * diff + c.tail * partial_prod;
    partial_prod *= c.partial;
  }
  return diff;
}

void check_eval_radius(const IntensityVector& L, std::span<const double> eval_radius) {
  if (eval_radius.size() != L.dim())
    throw std::invalid_argument("sampler: eval_radius dimension mismatch");
  for (double r : eval_radius) {
    if (!(r >= 0.0) || r >= 1.0)
      throw std::invalid_argument("sampler: eval_radius must lie in [0, 1)");
  }
}

}  // namespace

std::size_t DegreeBox::flat_size() const {
  std::size_t total = 1;
  for (int m : degrees) {
    if (m < 0) throw std::invalid_argument("DegreeBox: negative degree");
    total *= static_cast<std::size_t>(m) + 1;
  }
  return total;
}

double basis_logsq(std::span<const int> alpha, const IntensityVector& L) {
  if (alpha.size() != L.dim()) throw std::invalid_argument("basis_logsq: dimension mismatch");
  double acc = 0.0;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    const double a = static_cast<double>(alpha[j]);
    acc += std::lgamma(L[j] + a) - std::lgamma(a + 1.0) - std::lgamma(L[j]);
  }
  return acc;
}

DegreeBox truncation_degree(const IntensityVector& L, std::span<const double> eval_radius,
                            double tol, int hard_cap) {
  check_eval_radius(L, eval_radius);
  if (!(tol >= 0.0)) throw std::invalid_argument("truncation_degree: tol must be >= 0");
  const std::size_t n = L.dim();
  std::vector<double> log_full(n);
  double log_full_sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    log_full[j] = -L[j] * std::log1p(-eval_radius[j] * eval_radius[j]);
    log_full_sum += log_full[j];
  }
  DegreeBox box;
  box.degrees.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    // Coordinate j's budget: its tail times the other coordinates' full
    // diagonal must stay below tol / n.
    const double other_full = std::exp(log_full_sum - log_full[j]);
    const double target = tol / static_cast<double>(n) / other_full;
    const double r_sq = eval_radius[j] * eval_radius[j];
    double term_next = term_ratio(L[j], r_sq, 0);  // c_1^2 r^2
    int M = 0;
    for (;; ++M) {
      const double q = std::max(term_ratio(L[j], r_sq, M + 1), r_sq);
      if (q < 1.0 && term_next / (1.0 - q) <= target) break;
      if (M >= hard_cap)
        throw numerical_error("truncation_degree: degree cap exceeded at coordinate " +
                              std::to_string(j));
      term_next *= term_ratio(L[j], r_sq, M + 1);
    }
    box.degrees[j] = M;
  }
  return box;
}

BasisCoefficientTable::BasisCoefficientTable(IntensityVector L, DegreeBox box,
                                             std::vector<double> eval_radius)
    : L_(std::move(L)), box_(std::move(box)), eval_radius_(std::move(eval_radius)) {
  const std::size_t n = L_.dim();
  if (box_.dim() != n) throw std::invalid_argument("BasisCoefficientTable: box dimension mismatch");
  check_eval_radius(L_, eval_radius_);
  if (n > kMaxDim) throw std::invalid_argument("BasisCoefficientTable: dimension must be <= 4");
  for (int m : box_.degrees) {
    if (m < 0 || m > kMaxDegreePerCoord)
      throw std::invalid_argument("BasisCoefficientTable: degree out of range");
  }
  // Per-coordinate log(c_k^2) prefixes, then tensor sums over the box.
  std::vector<std::vector<double>> logsq1d(n);
  for (std::size_t j = 0; j < n; ++j) {
    logsq1d[j].resize(static_cast<std::size_t>(box_.degrees[j]) + 1);
    const double lgL = std::lgamma(L_[j]);
    for (int k = 0; k <= box_.degrees[j]; ++k) {
      const double a = static_cast<double>(k);
      logsq1d[j][static_cast<std::size_t>(k)] = std::lgamma(L_[j] + a) - std::lgamma(a + 1.0) - lgL;
    }
  }
  logsq_.resize(box_.flat_size());
  std::vector<int> alpha(n, 0);
  for (std::size_t flat = 0; flat < logsq_.size(); ++flat) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += logsq1d[j][static_cast<std::size_t>(alpha[j])];
    logsq_[flat] = acc;
    for (std::size_t j = n; j-- > 0;) {
      if (alpha[j] < box_.degrees[j]) {
        ++alpha[j];
        break;
      }
      alpha[j] = 0;
    }
  }
  std::vector<CoordinateTail> per_coord(n);
  for (std::size_t j = 0; j < n; ++j)
    per_coord[j] = coordinate_tail(L_[j], eval_radius_[j], box_.degrees[j]);
  tail_bound_ = combined_tail(per_coord);
}

std::shared_ptr<const BasisCoefficientTable> BasisCoefficientTable::certified(
    IntensityVector L, std::vector<double> eval_radius, double tol, int hard_cap) {
  DegreeBox box = truncation_degree(L, eval_radius, tol, hard_cap);
  return std::shared_ptr<const BasisCoefficientTable>(
      new BasisCoefficientTable(std::move(L), std::move(box), std::move(eval_radius)));
}

std::shared_ptr<const BasisCoefficientTable> BasisCoefficientTable::with_box(
    IntensityVector L, DegreeBox box, std::vector<double> eval_radius) {
  return std::shared_ptr<const BasisCoefficientTable>(
      new BasisCoefficientTable(std::move(L), std::move(box), std::move(eval_radius)));
}

std::uint64_t coefficient_stream_index(std::span<const int> alpha) {
  if (alpha.size() > kMaxDim)
    throw std::invalid_argument("coefficient_stream_index: dimension must be <= 4");
  std::uint64_t packed = 0;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (alpha[j] < 0 || alpha[j] > kMaxDegreePerCoord)
      throw std::invalid_argument("coefficient_stream_index: degree out of range");
    packed |= static_cast<std::uint64_t>(alpha[j]) << (16 * j);
  }
  return packed;
}

GafSample draw_sample(std::shared_ptr<const BasisCoefficientTable> table, std::uint64_t seed,
                      std::uint64_t trial_index) {
  if (!table) throw std::invalid_argument("draw_sample: null table");
  const std::size_t n = table->dim();
  const std::size_t total = table->box().flat_size();
  GafSample s;
  s.table = std::move(table);
  s.seed = seed;
  s.trial_index = trial_index;
  s.a.resize(total);
  s.coeff.resize(total);
  std::vector<int> alpha(n, 0);
  const DegreeBox& box = s.table->box();
  for (std::size_t flat = 0; flat < total; ++flat) {
    const std::uint64_t stream = coefficient_stream_index(alpha);
    const Complex g = standard_complex_gaussian(seed, trial_index, stream);
    s.a[flat] = g;
    const double logsq = s.table->logsq(flat);
    s.coeff[flat] = logsq < kLogSqUnderflow ? Complex(0.0, 0.0) : g * std::exp(0.5 * logsq);
    for (std::size_t j = n; j-- > 0;) {
      if (alpha[j] < box.degrees[j]) {
        ++alpha[j];
        break;
      }
      alpha[j] = 0;
    }
  }
  return s;
}

GafSample draw_sample(const IntensityVector& L, const DegreeBox& box,
                      std::vector<double> eval_radius, std::uint64_t seed,
                      std::uint64_t trial_index) {
  return draw_sample(BasisCoefficientTable::with_box(L, box, std::move(eval_radius)), seed,
                     trial_index);
}

namespace {

Complex horner_nd(const Complex* c, const int* degrees, const Complex* z, std::size_t n) {
  if (n == 1) {
    Complex acc = c[degrees[0]];
    for (int k = degrees[0] - 1; k >= 0; --k) acc = acc * z[0] + c[k];
    return acc;
  }
  std::size_t stride = 1;
  for (std::size_t j = 1; j < n; ++j) stride *= static_cast<std::size_t>(degrees[j]) + 1;
  Complex acc = horner_nd(c + static_cast<std::size_t>(degrees[0]) * stride, degrees + 1, z + 1,
                          n - 1);
  for (int k = degrees[0] - 1; k >= 0; --k)
    acc = acc * z[0] + horner_nd(c + static_cast<std::size_t>(k) * stride, degrees + 1, z + 1,
                                 n - 1);
  return acc;
}

void check_inside_radius(const GafSample& s, std::span<const Complex> z) {
  if (z.size() != s.dim()) throw std::invalid_argument("evaluate: dimension mismatch");
  const auto& r = s.eval_radius();
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (std::abs(z[j]) > r[j] + 1e-12)
      throw std::domain_error("evaluate: point outside the certified radius");
  }
}

}  // namespace

Complex evaluate(const GafSample& s, std::span<const Complex> z) {
  check_inside_radius(s, z);
  return horner_nd(s.coeff.data(), s.box().degrees.data(), z.data(), s.dim());
}

Complex evaluate(const GafSample& s, const PolydiskPoint& z) {
  return evaluate(s, std::span<const Complex>(z.coords()));
}

double log_normalized_sq(const GafSample& s, std::span<const Complex> z) {
  const Complex v = evaluate(s, z);
  const double nsq = std::norm(v);
  if (nsq == 0.0) return -std::numeric_limits<double>::infinity();
  double acc = std::log(nsq);
  for (std::size_t j = 0; j < z.size(); ++j) acc += s.L()[j] * std::log1p(-std::norm(z[j]));
  return acc;
}

double log_normalized_sq(const GafSample& s, const PolydiskPoint& z) {
  return log_normalized_sq(s, std::span<const Complex>(z.coords()));
}

void evaluate_nodes(const GafSample& s, std::span<const Complex> nodes, std::span<Complex> out) {
  if (s.dim() != 1) throw std::invalid_argument("evaluate_nodes: sample must be univariate");
  if (out.size() != nodes.size()) throw std::invalid_argument("evaluate_nodes: size mismatch");
  const int M = s.box().degrees[0];
  const Complex* c = s.coeff.data();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Complex z = nodes[i];
    Complex acc = c[M];
    for (int k = M - 1; k >= 0; --k) acc = acc * z + c[k];
    out[i] = acc;
  }
}

void evaluate_grid2(const GafSample& s, std::span<const Complex> grid1,
                    std::span<const Complex> grid2, std::span<Complex> out) {
  if (s.dim() != 2) throw std::invalid_argument("evaluate_grid2: sample must be bivariate");
  const std::size_t g1 = grid1.size();
  const std::size_t g2 = grid2.size();
  if (out.size() != g1 * g2) throw std::invalid_argument("evaluate_grid2: size mismatch");
  const int M1 = s.box().degrees[0];
  const int M2 = s.box().degrees[1];
  const std::size_t stride = static_cast<std::size_t>(M2) + 1;
  // Stage 1: collapse the second coordinate row by row.
  std::vector<Complex> rows(static_cast<std::size_t>(M1 + 1) * g2);
  for (int k1 = 0; k1 <= M1; ++k1) {
    const Complex* c = s.coeff.data() + static_cast<std::size_t>(k1) * stride;
    Complex* dst = rows.data() + static_cast<std::size_t>(k1) * g2;
    for (std::size_t i2 = 0; i2 < g2; ++i2) {
      const Complex z = grid2[i2];
      Complex acc = c[M2];
      for (int k = M2 - 1; k >= 0; --k) acc = acc * z + c[k];
      dst[i2] = acc;
    }
  }
  // Stage 2: collapse the first coordinate column by column.
  std::vector<Complex> column(static_cast<std::size_t>(M1) + 1);
  for (std::size_t i2 = 0; i2 < g2; ++i2) {
    for (int k1 = 0; k1 <= M1; ++k1)
      column[static_cast<std::size_t>(k1)] = rows[static_cast<std::size_t>(k1) * g2 + i2];
    for (std::size_t i1 = 0; i1 < g1; ++i1) {
      const Complex z = grid1[i1];
      Complex acc = column[static_cast<std::size_t>(M1)];
      for (int k = M1 - 1; k >= 0; --k) acc = acc * z + column[static_cast<std::size_t>(k)];
      out[i1 * g2 + i2] = acc;
    }
  }
}

}  // namespace polygaf
