#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "polygaf/kernel.hpp"
#include "polygaf/quadrature.hpp"
#include "polygaf/stats.hpp"

namespace polygaf {

namespace {

// Reduced 3-D grid for double integrals over one coordinate pair: with both
// points in polar form and everything invariant under joint rotation,
//   iint F(zeta, xi) d nu d nu
//     = (2/pi) int_0^R int_0^R int_0^{2 pi} F(r, s, phi) W(r) W(s) dphi dr ds
// with W(r) = r / (1 - r^2)^2. Radial Gauss-Legendre legs tensor a midpoint
// angular rule; the (r, s) symmetry stores each unordered pair once.
struct PairGrid {
  int n_rad = 0;
  int n_ang = 0;
  std::vector<double> r;                      // radial nodes
  std::vector<double> weight;                 // gl weight * W(r)
  std::vector<std::pair<int, int>> pairs;  // i <= k; contraction coefficients
                                           // already count both orders
  std::vector<double> log_t;               // (pair, angle): L log(1 - rho^2)
  double max_t = 0.0;

  std::size_t n_pairs() const { return pairs.size(); }
};

PairGrid make_pair_grid(double L, double R, int n_rad, int n_ang) {
  PairGrid grid;
  grid.n_rad = n_rad;
  grid.n_ang = n_ang;
  const GaussLegendreRule radial = gauss_legendre(n_rad, 0.0, R);
  grid.r = radial.nodes;
  grid.weight.resize(static_cast<std::size_t>(n_rad));
  for (int i = 0; i < n_rad; ++i) {
    const double r = radial.nodes[static_cast<std::size_t>(i)];
    const double one_minus = 1.0 - r * r;
    grid.weight[static_cast<std::size_t>(i)] =
        radial.weights[static_cast<std::size_t>(i)] * r / (one_minus * one_minus);
  }
  for (int i = 0; i < n_rad; ++i)
    for (int k = i; k < n_rad; ++k) grid.pairs.emplace_back(i, k);
  grid.log_t.resize(grid.n_pairs() * static_cast<std::size_t>(n_ang));
  double max_log_t = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < grid.n_pairs(); ++p) {
    const double r = grid.r[static_cast<std::size_t>(grid.pairs[p].first)];
    const double s = grid.r[static_cast<std::size_t>(grid.pairs[p].second)];
    const double base = std::log1p(-r * r) + std::log1p(-s * s);
    for (int l = 0; l < n_ang; ++l) {
      const double phi = (l + 0.5) * 2.0 * std::numbers::pi / n_ang;
      const double denom = 1.0 + r * r * s * s - 2.0 * r * s * std::cos(phi);
      const double lt = L * (base - std::log(denom));
      grid.log_t[p * static_cast<std::size_t>(n_ang) + static_cast<std::size_t>(l)] = lt;
      max_log_t = std::max(max_log_t, lt);
    }
  }
  grid.max_t = std::exp(max_log_t);
  return grid;
}

// Pair-contraction coefficients for A[u, v] = iint t^m u(|zeta|) v(|xi|) dnu dnu:
// A = (4 / n_ang) sum_p coeff_p sum_l t^m(p, l).
std::vector<double> pair_coefficients(const PairGrid& grid, const std::function<double(double)>& u,
                                      const std::function<double(double)>& v) {
  std::vector<double> coeff(grid.n_pairs());
  std::vector<double> uw(grid.r.size()), vw(grid.r.size());
  for (std::size_t i = 0; i < grid.r.size(); ++i) {
    uw[i] = u(grid.r[i]) * grid.weight[i];
    vw[i] = v(grid.r[i]) * grid.weight[i];
  }
  for (std::size_t p = 0; p < grid.n_pairs(); ++p) {
    const auto [i, k] = grid.pairs[p];
    const std::size_t si = static_cast<std::size_t>(i);
    const std::size_t sk = static_cast<std::size_t>(k);
    coeff[p] = i == k ? uw[si] * vw[si] : uw[si] * vw[sk] + uw[sk] * vw[si];
  }
  return coeff;
}

struct RadialFunctions {
  std::function<double(double)> P;  // (1-r^2)^2 * lap(r^2)
  std::function<double(double)> Q;  // g(r^2)
};

RadialFunctions radial_functions(const TestForm& form, std::size_t j) {
  const auto lap = form.radial[j].lap;
  const auto g = form.radial[j].g;
  RadialFunctions f;
  f.P = [lap](double r) {
    const double one_minus = 1.0 - r * r;
    return one_minus * one_minus * lap(r * r);
  };
  f.Q = [g](double r) { return g(r * r); };
  return f;
}

void require_separable(const TestForm& form, const IntensityVector& L, const char* what) {
  if (L.dim() != form.n) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  if (!form.separable_radial())
    throw std::invalid_argument(std::string(what) + ": needs a separable radial test form");
  if (form.n < 1 || form.n > 2)
    throw std::invalid_argument(std::string(what) + ": supports n = 1 or 2");
}

// Direct evaluation for n = 1: Li2 applied on the reduced grid. Streams the
// angular loop instead of materializing a pair-by-angle table (which would
// need gigabytes at the finer refinement levels), and skips radial pairs
// whose kernel maximum is below machine noise — the kernel concentrates near
// the diagonal r = s once L is large.
double direct_univariate(const TestForm& form, const IntensityVector& L, int n_rad, int n_ang) {
  const double R = form.radial[0].support_radius;
  const double intensity = L[0];
  const GaussLegendreRule radial = gauss_legendre(n_rad, 0.0, R);
  const RadialFunctions f = radial_functions(form, 0);
  std::vector<double> pw(static_cast<std::size_t>(n_rad));
  for (int i = 0; i < n_rad; ++i) {
    const double r = radial.nodes[static_cast<std::size_t>(i)];
    const double one_minus = 1.0 - r * r;
    pw[static_cast<std::size_t>(i)] =
        f.P(r) * radial.weights[static_cast<std::size_t>(i)] * r / (one_minus * one_minus);
  }
  std::vector<double> neg_log_denom(static_cast<std::size_t>(n_ang));
  double acc = 0.0;
  constexpr double kNegligibleLogT = -40.0;  // exp(-40) ~ 4e-18: below quadrature noise
  for (int i = 0; i < n_rad; ++i) {
    const double r = radial.nodes[static_cast<std::size_t>(i)];
    for (int k = i; k < n_rad; ++k) {
      const double s = radial.nodes[static_cast<std::size_t>(k)];
      const double base = std::log1p(-r * r) + std::log1p(-s * s);
      // Largest value over angles sits at phi = 0 where the denominator is (1 - rs)^2.
      if (intensity * (base - 2.0 * std::log1p(-r * s)) < kNegligibleLogT) continue;
      const double rs = r * s;
      const double one_plus = 1.0 + rs * rs;
      for (int l = 0; l < n_ang; ++l) {
        const double phi = (l + 0.5) * 2.0 * std::numbers::pi / n_ang;
        neg_log_denom[static_cast<std::size_t>(l)] = -std::log(one_plus - 2.0 * rs * std::cos(phi));
      }
      double angular = 0.0;
      for (int l = 0; l < n_ang; ++l) {
        const double lt = intensity * (base + neg_log_denom[static_cast<std::size_t>(l)]);
        if (lt >= kNegligibleLogT) angular += dilog(std::exp(lt));
      }
      const double coeff = i == k ? pw[static_cast<std::size_t>(i)] * pw[static_cast<std::size_t>(i)]
                                  : 2.0 * pw[static_cast<std::size_t>(i)] *
                                        pw[static_cast<std::size_t>(k)];
      acc += coeff * angular;
    }
  }
  return 4.0 * acc / n_ang;
}

// One coordinate's state while the dilogarithm series is summed term by term.
struct SeriesCoordinate {
  PairGrid grid;
  std::vector<double> t_base;
  std::vector<double> t_pow;
  std::vector<double> inv_tail;                // 1 / (1 - t); +inf where t == 1
  std::vector<double> c_pp, c_pq, c_qq;        // signed contraction coefficients
  std::vector<double> a_pp, a_pq, a_qq;        // absolute-value counterparts
  double A_pp = 0.0, A_pq = 0.0, A_qq = 0.0;   // current-power integrals
  double B_pp = 0.0, B_pq = 0.0, B_qq = 0.0;   // with |P|, |Q| instead
  double T_pp = 0.0, T_pq = 0.0, T_qq = 0.0;   // tail bounds (see tail_pass)

  void contract() {
    const std::size_t n_ang = static_cast<std::size_t>(grid.n_ang);
    A_pp = A_pq = A_qq = B_pp = B_pq = B_qq = 0.0;
    for (std::size_t p = 0; p < grid.n_pairs(); ++p) {
      double sigma = 0.0;
      const double* row = t_pow.data() + p * n_ang;
      for (std::size_t l = 0; l < n_ang; ++l) sigma += row[l];
      A_pp += sigma * c_pp[p];
      A_pq += sigma * c_pq[p];
      A_qq += sigma * c_qq[p];
      B_pp += sigma * a_pp[p];
      B_pq += sigma * a_pq[p];
      B_qq += sigma * a_qq[p];
    }
    const double scale = 4.0 / grid.n_ang;
    A_pp *= scale;
    A_pq *= scale;
    A_qq *= scale;
    B_pp *= scale;
    B_pq *= scale;
    B_qq *= scale;
  }

  // Per-node bound on sum_{m' > m} t^{m'} / m'^2, contracted with the
  // absolute coefficients.  Each node uses the smaller of the geometric tail
  // t^{m+1} / ((m+1)^2 (1 - t)) and the harmonic tail 1/m, so nodes with t
  // arbitrarily close to (or equal to) 1 stay controlled: their coefficient
  // mass is tiny even though a global sup-based geometric bound diverges.
  void tail_pass(int m) {
    const std::size_t n_ang = static_cast<std::size_t>(grid.n_ang);
    const double m1 = static_cast<double>(m) + 1.0;
    const double harmonic_cap = m1 * m1 / static_cast<double>(m);
    T_pp = T_pq = T_qq = 0.0;
    for (std::size_t p = 0; p < grid.n_pairs(); ++p) {
      double sigma = 0.0;
      const double* row = t_pow.data() + p * n_ang;
      const double* inv = inv_tail.data() + p * n_ang;
      for (std::size_t l = 0; l < n_ang; ++l)
        sigma += row[l] == 0.0 ? 0.0 : std::min(row[l] * inv[l], harmonic_cap);
      T_pp += sigma * a_pp[p];
      T_pq += sigma * a_pq[p];
      T_qq += sigma * a_qq[p];
    }
    const double scale = 4.0 / (grid.n_ang * m1 * m1);
    T_pp *= scale;
    T_pq *= scale;
    T_qq *= scale;
  }

  void advance_power() {
    for (std::size_t i = 0; i < t_pow.size(); ++i) {
      const double next = t_pow[i] * t_base[i];
      // Flush vanishing powers so the loop never grinds through denormals.
      t_pow[i] = next < 1e-300 ? 0.0 : next;
    }
  }
};

SeriesCoordinate make_series_coordinate(const TestForm& form, const IntensityVector& L,
                                        std::size_t j, int n_rad, int n_ang) {
  SeriesCoordinate coord;
  coord.grid = make_pair_grid(L[j], form.radial[j].support_radius, n_rad, n_ang);
  coord.t_base.resize(coord.grid.log_t.size());
  coord.inv_tail.resize(coord.grid.log_t.size());
  for (std::size_t i = 0; i < coord.t_base.size(); ++i) {
    coord.t_base[i] = std::exp(coord.grid.log_t[i]);
    coord.inv_tail[i] = 1.0 / (1.0 - coord.t_base[i]);  // +inf when t rounds to 1
  }
  coord.t_pow = coord.t_base;
  const RadialFunctions f = radial_functions(form, j);
  const auto abs_of = [](const std::function<double(double)>& h) {
    return [h](double r) { return std::abs(h(r)); };
  };
  coord.c_pp = pair_coefficients(coord.grid, f.P, f.P);
  coord.c_pq = pair_coefficients(coord.grid, f.P, f.Q);
  coord.c_qq = pair_coefficients(coord.grid, f.Q, f.Q);
  coord.a_pp = pair_coefficients(coord.grid, abs_of(f.P), abs_of(f.P));
  coord.a_pq = pair_coefficients(coord.grid, abs_of(f.P), abs_of(f.Q));
  coord.a_qq = pair_coefficients(coord.grid, abs_of(f.Q), abs_of(f.Q));
  return coord;
}

double series_value(const TestForm& form, const IntensityVector& L, int n_rad, int n_ang,
                    double inner_tol) {
  const std::size_t n = form.n;
  std::vector<SeriesCoordinate> coords;
  for (std::size_t j = 0; j < n; ++j)
    coords.push_back(make_series_coordinate(form, L, j, n_rad, n_ang));
  double acc = 0.0;
  constexpr int kMaxTerms = 500000;
  for (int m = 1; m <= kMaxTerms; ++m) {
    for (auto& c : coords) c.contract();
    double term;
    if (n == 1) {
      term = coords[0].A_pp;
    } else {
      term = coords[0].A_pp * coords[1].A_qq + 2.0 * coords[0].A_pq * coords[1].A_pq +
             coords[0].A_qq * coords[1].A_pp;
    }
    acc += term / (static_cast<double>(m) * static_cast<double>(m));
    if (m >= 3 && (m & 7) == 0) {
      // Remaining-sum bound.  For one coordinate this is the contracted
      // per-node tail directly; for two, each product of power sums is
      // bounded by the current power's absolute contraction of one factor
      // (power sums with nonnegative weights decrease in m) times the
      // tailed contraction of the other.
      double rest;
      if (n == 1) {
        coords[0].tail_pass(m);
        rest = coords[0].T_pp;
      } else {
        coords[0].tail_pass(m);
        coords[1].tail_pass(m);
        const double via_0 =
            coords[0].T_pp * coords[1].B_qq + 2.0 * coords[0].T_pq * coords[1].B_pq +
            coords[0].T_qq * coords[1].B_pp;
        const double via_1 =
            coords[0].B_pp * coords[1].T_qq + 2.0 * coords[0].B_pq * coords[1].T_pq +
            coords[0].B_qq * coords[1].T_pp;
        rest = std::min(via_0, via_1);
      }
      if (rest <= inner_tol * std::max(std::abs(acc), 1e-300)) return acc;
    }
    for (auto& c : coords) c.advance_power();
  }
  throw numerical_error("bipotential_variance: series did not converge");
}

}  // namespace

namespace detail {

double bipotential_variance_series(const TestForm& form, const IntensityVector& L, double rtol) {
  require_separable(form, L, "bipotential_variance");
  const int base_rad = 32;
  const int base_ang = 64;
  double prev = 0.0;
  bool have_prev = false;
  for (int level = 0; level < 3; ++level) {
    const double cur =
        series_value(form, L, base_rad << level, base_ang << level, 0.1 * rtol);
    if (have_prev && std::abs(cur - prev) <= rtol * (1.0 + std::abs(cur))) return cur;
    prev = cur;
    have_prev = true;
  }
  throw numerical_error("bipotential_variance: grid refinement did not converge");
}

double radial_pair_integral(double L, double R, const std::function<double(double)>& u,
                            const std::function<double(double)>& v, int power, int n_rad,
                            int n_ang) {
  const PairGrid grid = make_pair_grid(L, R, n_rad, n_ang);
  const std::vector<double> coeff = pair_coefficients(grid, u, v);
  double acc = 0.0;
  for (std::size_t p = 0; p < grid.n_pairs(); ++p) {
    double angular = 0.0;
    for (int l = 0; l < grid.n_ang; ++l)
      angular += std::exp(power * grid.log_t[p * static_cast<std::size_t>(grid.n_ang) +
                                             static_cast<std::size_t>(l)]);
    acc += coeff[p] * angular;
  }
  return 4.0 * acc / grid.n_ang;
}

}  // namespace detail

double bipotential_variance(const TestForm& form, const IntensityVector& L, double rtol) {
  require_separable(form, L, "bipotential_variance");
  if (form.n == 2) return detail::bipotential_variance_series(form, L, rtol);
  const int base_rad = 32;
  const int base_ang = 64;
  double prev = 0.0;
  bool have_prev = false;
  for (int level = 0; level < 6; ++level) {
    const double cur = direct_univariate(form, L, base_rad << level, base_ang << level);
    if (have_prev && std::abs(cur - prev) <= rtol * (1.0 + std::abs(cur))) return cur;
    prev = cur;
    have_prev = true;
  }
  throw numerical_error("bipotential_variance: grid refinement did not converge");
}

}  // namespace polygaf
