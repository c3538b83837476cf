#include "neasslab/fock.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace neasslab {

namespace {

void check_mode_count(int n_modes) {
  if (n_modes < 1 || n_modes > kMaxModes)
    throw std::invalid_argument("mode count " + std::to_string(n_modes) +
                                " outside [1, " + std::to_string(kMaxModes) + "]");
}

// Parity of occupied modes strictly below `mode`: the JW string sign.
inline int jw_sign(std::uint32_t bits, int mode) {
  std::uint32_t below = bits & ((1u << mode) - 1u);
  return (std::popcount(below) & 1) ? -1 : 1;
}

}  // namespace

FockBasis FockBasis::full(int n_modes) {
  check_mode_count(n_modes);
  FockBasis b;
  b.n_modes_ = n_modes;
  const std::uint32_t dim = 1u << n_modes;
  b.states_.resize(dim);
  b.index_.resize(dim);
  for (std::uint32_t s = 0; s < dim; ++s) {
    b.states_[s] = s;
    b.index_[s] = static_cast<int>(s);
  }
  return b;
}

FockBasis FockBasis::sector(int n_modes, int n_particles) {
  check_mode_count(n_modes);
  if (n_particles < 0 || n_particles > n_modes)
    throw std::invalid_argument("particle number outside [0, n_modes]");
  FockBasis b;
  b.n_modes_ = n_modes;
  b.sector_ = n_particles;
  const std::uint32_t space = 1u << n_modes;
  b.index_.assign(space, -1);
  for (std::uint32_t s = 0; s < space; ++s) {
    if (std::popcount(s) == n_particles) {
      b.index_[s] = static_cast<int>(b.states_.size());
      b.states_.push_back(s);
    }
  }
  return b;
}

int FockBasis::index_of(std::uint32_t bits) const {
  if (bits >= index_.size()) return -1;
  return index_[bits];
}

Matrix monomial_matrix(const FockBasis& basis, const std::vector<MonomialFactor>& factors) {
  const int dim = basis.dim();
  Matrix out = Matrix::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    std::uint32_t bits = basis.state(col);
    int sign = 1;
    bool dead = false;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
      const std::uint32_t mask = 1u << it->mode;
      if (it->dagger) {
        if (bits & mask) { dead = true; break; }
        sign *= jw_sign(bits, it->mode);
        bits |= mask;
      } else {
        if (!(bits & mask)) { dead = true; break; }
        sign *= jw_sign(bits, it->mode);
        bits &= ~mask;
      }
    }
    if (dead) continue;
    int row = basis.index_of(bits);
    if (row < 0)
      throw std::invalid_argument("monomial leaves the particle-number sector");
    out(row, col) += sign;
  }
  return out;
}

Matrix creation(const FockBasis& basis, int mode) {
  if (!basis.is_full())
    throw std::invalid_argument("creation operator is odd: full basis required");
  return monomial_matrix(basis, {{mode, true}});
}

Matrix annihilation(const FockBasis& basis, int mode) {
  if (!basis.is_full())
    throw std::invalid_argument("annihilation operator is odd: full basis required");
  return monomial_matrix(basis, {{mode, false}});
}

Matrix number_operator(const FockBasis& basis, int mode) {
  const int dim = basis.dim();
  Matrix out = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    if (basis.state(i) & (1u << mode)) out(i, i) = 1.0;
  return out;
}

Matrix total_number(const FockBasis& basis) {
  const int dim = basis.dim();
  Matrix out = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) out(i, i) = std::popcount(basis.state(i));
  return out;
}

Matrix parity_operator(const FockBasis& basis) {
  const int dim = basis.dim();
  Matrix out = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    out(i, i) = (std::popcount(basis.state(i)) & 1) ? -1.0 : 1.0;
  return out;
}

bool is_even(const FockBasis& basis, const Matrix& a, double tol) {
  // Even <=> vanishing matrix elements between opposite-parity states.
  for (int j = 0; j < basis.dim(); ++j) {
    int pj = std::popcount(basis.state(j)) & 1;
    for (int i = 0; i < basis.dim(); ++i) {
      if ((std::popcount(basis.state(i)) & 1) != pj && std::abs(a(i, j)) > tol)
        return false;
    }
  }
  return true;
}

bool conserves_number(const FockBasis& basis, const Matrix& a, double tol) {
  for (int j = 0; j < basis.dim(); ++j) {
    int nj = std::popcount(basis.state(j));
    for (int i = 0; i < basis.dim(); ++i) {
      if (std::popcount(basis.state(i)) != nj && std::abs(a(i, j)) > tol)
        return false;
    }
  }
  return true;
}

Matrix embed(const FockBasis& basis, const std::vector<int>& modes, const Matrix& sub) {
  const int ns = static_cast<int>(modes.size());
  for (int i = 0; i + 1 < ns; ++i)
    if (modes[i] >= modes[i + 1])
      throw std::invalid_argument("embed: modes must be strictly ascending");
  if (!modes.empty() && (modes.front() < 0 || modes.back() >= basis.n_modes()))
    throw std::invalid_argument("embed: mode outside the ambient space");
  if (sub.rows() != (1 << ns) || sub.cols() != (1 << ns))
    throw std::invalid_argument("embed: sub-operator dimension mismatch");
  if (ns > 0) {
    FockBasis small = FockBasis::full(ns);
    if (!is_even(small, sub))
      throw std::invalid_argument("embed: only even operators embed unambiguously");
    if (!basis.is_full() && !conserves_number(small, sub))
      throw std::invalid_argument(
          "embed: sector basis requires a number-conserving operator");
  }

  std::uint32_t mask = 0;
  for (int m : modes) mask |= 1u << m;

  const int dim = basis.dim();
  Matrix out = Matrix::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    const std::uint32_t bits = basis.state(col);
    const std::uint32_t outside = bits & ~mask;
    // Gather sub-space column index and its fermionic gather sign: each
    // occupied support mode picks up the parity of occupied outside modes
    // below it (cancels pairwise for even operators).
    int subcol = 0;
    int sign_col = 1;
    for (int i = 0; i < ns; ++i) {
      if (bits & (1u << modes[i])) {
        subcol |= 1 << i;
        std::uint32_t out_below = outside & ((1u << modes[i]) - 1u);
        if (std::popcount(out_below) & 1) sign_col = -sign_col;
      }
    }
    for (int subrow = 0; subrow < (1 << ns); ++subrow) {
      const Complex v = sub(subrow, subcol);
      if (v == Complex(0.0, 0.0)) continue;
      std::uint32_t newbits = outside;
      int sign_row = 1;
      for (int i = 0; i < ns; ++i) {
        if (subrow & (1 << i)) {
          newbits |= 1u << modes[i];
          std::uint32_t out_below = outside & ((1u << modes[i]) - 1u);
          if (std::popcount(out_below) & 1) sign_row = -sign_row;
        }
      }
      int row = basis.index_of(newbits);
      if (row < 0) continue;  // leaves the sector; for even N-conserving terms this never triggers
      out(row, col) += static_cast<double>(sign_row * sign_col) * v;
    }
  }
  return out;
}

ModePermutationTable mode_permutation_table(const FockBasis& basis,
                                            const std::vector<int>& perm_pos) {
  if (!basis.is_full())
    throw std::invalid_argument("mode_permutation: full basis required");
  const int n = basis.n_modes();
  if (static_cast<int>(perm_pos.size()) != n)
    throw std::invalid_argument("mode_permutation: permutation size mismatch");
  std::vector<bool> seen(n, false);
  for (int p : perm_pos) {
    if (p < 0 || p >= n || seen[p])
      throw std::invalid_argument("mode_permutation: not a permutation");
    seen[p] = true;
  }
  const int dim = basis.dim();
  ModePermutationTable table;
  table.index.resize(dim);
  table.sign.resize(dim);
  for (int col = 0; col < dim; ++col) {
    const std::uint32_t bits = basis.state(col);
    std::uint32_t newbits = 0;
    for (int m = 0; m < n; ++m)
      if (bits & (1u << m)) newbits |= 1u << perm_pos[m];
    // Sign: parity of the permutation restricted to occupied modes.  Count
    // inversions among occupied modes ordered by old index vs new position.
    int sign = 1;
    for (int m1 = 0; m1 < n; ++m1) {
      if (!(bits & (1u << m1))) continue;
      for (int m2 = m1 + 1; m2 < n; ++m2) {
        if ((bits & (1u << m2)) && perm_pos[m1] > perm_pos[m2]) sign = -sign;
      }
    }
    table.index[col] = basis.index_of(newbits);
    table.sign[col] = sign;
  }
  return table;
}

Matrix mode_permutation(const FockBasis& basis, const std::vector<int>& perm_pos) {
  const ModePermutationTable table = mode_permutation_table(basis, perm_pos);
  const int dim = basis.dim();
  Matrix out = Matrix::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) out(table.index[col], col) = table.sign[col];
  return out;
}

GroundState ground_state(const Matrix& h, double degeneracy_tol) {
  if (!is_hermitian(h, 1e-9))
    throw std::invalid_argument("ground_state: Hamiltonian must be Hermitian");
  EighResult eg = eigh(h);
  GroundState gs;
  gs.energies = eg.values;
  gs.psi = eg.vectors.col(0);
  gs.energy = eg.values(0);
  gs.gap = eg.values.size() > 1 ? eg.values(1) - eg.values(0) : 0.0;
  gs.unique = gs.gap > degeneracy_tol;
  return gs;
}

}  // namespace neasslab
