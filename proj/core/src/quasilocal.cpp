#include "neasslab/quasilocal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace neasslab {

namespace {

std::vector<int> modes_of_sites(const Lattice& lat, const std::vector<Site>& sites) {
  std::vector<int> modes;
  modes.reserve(sites.size() * lat.spin());
  for (const Site& s : sites) {
    int rank = lat.site_index(s);
    if (rank < 0) throw std::invalid_argument("modes_of_sites: site outside lattice");
    for (int sigma = 0; sigma < lat.spin(); ++sigma)
      modes.push_back(rank * lat.spin() + sigma);
  }
  std::sort(modes.begin(), modes.end());
  return modes;
}

// Smallest window radius whose centered box contains every site.
int cover_radius(const Lattice& lat) {
  int m = 0;
  for (const Site& s : lat.sites())
    for (int c = 0; c < lat.dim(); ++c) m = std::max(m, std::abs(s[c]));
  return m;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  if (n < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) return 0.0;
  return (n * sxy - sx * sy) / denom;
}

}  // namespace

Matrix conditional_expectation(const FockBasis& basis, const Matrix& a,
                               const std::vector<int>& kept_modes) {
  if (!basis.is_full())
    throw std::invalid_argument("conditional_expectation: full basis required");
  const int n = basis.n_modes();
  const int dim = basis.dim();
  if (a.rows() != dim || a.cols() != dim)
    throw std::invalid_argument("conditional_expectation: dimension mismatch");
  for (std::size_t i = 0; i < kept_modes.size(); ++i) {
    if (kept_modes[i] < 0 || kept_modes[i] >= n)
      throw std::invalid_argument("conditional_expectation: mode out of range");
    if (i > 0 && kept_modes[i] <= kept_modes[i - 1])
      throw std::invalid_argument("conditional_expectation: modes must ascend");
  }
  if (!is_even(basis, a, 1e-9))
    throw std::invalid_argument("conditional_expectation: operator must be even");

  const int s = static_cast<int>(kept_modes.size());
  if (s == n) return a;
  if (s == 0) return (a.trace() / static_cast<double>(dim)) * Matrix::Identity(dim, dim);

  // Relabel so the kept modes are the low positions; the permutation sign is
  // the fermionic reordering sign, so conjugation is a CAR automorphism.
  std::vector<int> perm_pos(n, -1);
  int next = 0;
  for (int m : kept_modes) perm_pos[m] = next++;
  for (int m = 0; m < n; ++m)
    if (perm_pos[m] < 0) perm_pos[m] = next++;
  const ModePermutationTable tab = mode_permutation_table(basis, perm_pos);

  Matrix b(dim, dim);
  for (int col = 0; col < dim; ++col)
    for (int row = 0; row < dim; ++row)
      b(tab.index[row], tab.index[col]) = tab.sign[row] * tab.sign[col] * a(row, col);

  // Normalized trace over the high modes, then tensor the identity back in.
  // In the permuted labeling the full-basis index is lo + (hi << s).
  const int dim_low = 1 << s;
  const int dim_high = 1 << (n - s);
  Matrix ptr = Matrix::Zero(dim_low, dim_low);
  for (int hi = 0; hi < dim_high; ++hi) {
    const int off = hi << s;
    for (int cl = 0; cl < dim_low; ++cl)
      for (int rl = 0; rl < dim_low; ++rl) ptr(rl, cl) += b(off + rl, off + cl);
  }
  ptr /= static_cast<double>(dim_high);

  Matrix out = Matrix::Zero(dim, dim);
  for (int hi = 0; hi < dim_high; ++hi) {
    const int off = hi << s;
    for (int cl = 0; cl < dim_low; ++cl)
      for (int rl = 0; rl < dim_low; ++rl) {
        // Map back through the inverse permutation while writing.
        out(off + rl, off + cl) = ptr(rl, cl);
      }
  }

  Matrix result(dim, dim);
  for (int col = 0; col < dim; ++col)
    for (int row = 0; row < dim; ++row)
      result(row, col) = tab.sign[row] * tab.sign[col] * out(tab.index[row], tab.index[col]);
  return result;
}

Matrix conditional_expectation_window(const Lattice& lat, const FockBasis& basis,
                                      const Matrix& a, int window_radius) {
  if (basis.n_modes() != lat.n_modes())
    throw std::invalid_argument("conditional_expectation_window: basis/lattice mismatch");
  return conditional_expectation(basis, a, modes_of_sites(lat, lat.window(window_radius)));
}

double f_norm(const Lattice& lat, const FockBasis& basis, const Matrix& a,
              const DecayFunction& f) {
  const int kmax = cover_radius(lat);
  double best = 0.0;
  for (int k = 0; k <= kmax; ++k) {
    const Matrix res = a - conditional_expectation_window(lat, basis, a, k);
    const double fk = f(static_cast<double>(k));
    if (fk <= 0.0) throw std::invalid_argument("f_norm: decay function not positive");
    best = std::max(best, op_norm_auto(res) / fk);
  }
  return op_norm_auto(a) + best;
}

LocalizationProfile localization_profile(const Lattice& lat, const FockBasis& basis,
                                         const Matrix& a, double gamma) {
  LocalizationProfile prof;
  prof.gamma = gamma;
  const int kmax = cover_radius(lat);
  for (int k = 0; k <= kmax; ++k) {
    const Matrix res = a - conditional_expectation_window(lat, basis, a, k);
    prof.radii.push_back(k);
    prof.residuals.push_back(op_norm_auto(res));
  }
  std::vector<double> xs_lin, xs_str, ys;
  for (std::size_t i = 0; i < prof.radii.size(); ++i) {
    if (prof.residuals[i] <= 1e-13) continue;
    xs_lin.push_back(static_cast<double>(prof.radii[i]));
    xs_str.push_back(std::pow(static_cast<double>(prof.radii[i]), gamma));
    ys.push_back(std::log(prof.residuals[i]));
  }
  prof.slope_linear = ls_slope(xs_lin, ys);
  prof.slope_stretched = ls_slope(xs_str, ys);
  return prof;
}

ConeDecomposition cone_decomposition(const Lattice& lat, const FockBasis& basis,
                                     const Matrix& a, const std::vector<Site>& x,
                                     int delta0, int step) {
  if (delta0 < 0 || step < 1)
    throw std::invalid_argument("cone_decomposition: need delta0 >= 0 and step >= 1");
  const std::vector<Site> base = canonical_sites(lat, x);
  if (base.empty()) throw std::invalid_argument("cone_decomposition: empty support");

  ConeDecomposition cone;
  Matrix prev;
  int delta = delta0;
  const int nsites = lat.n_sites();
  for (;;) {
    const std::vector<Site> fat = lat.fatten(base, delta);
    Matrix cur = static_cast<int>(fat.size()) == nsites
                     ? a
                     : conditional_expectation(basis, a, modes_of_sites(lat, fat));
    Matrix layer = cone.layers.empty() ? cur : Matrix(cur - prev);
    cone.layers.push_back(layer);
    cone.radii.push_back(delta);
    cone.layer_norms.push_back(op_norm_auto(layer));
    prev = cur;
    if (static_cast<int>(fat.size()) == nsites) break;
    delta += step;
  }
  return cone;
}

}  // namespace neasslab
