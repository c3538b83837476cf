#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "neasslab/lattice.hpp"
#include "neasslab/linalg.hpp"

namespace neasslab {

// Basis of a fermionic Fock space over n_modes modes, either the full
// 2^n-dimensional space or a fixed particle-number sector.  Basis states are
// occupation bitstrings (mode m = bit m); mode order is the Jordan-Wigner
// order (lexicographic site order, then internal level).
class FockBasis {
 public:
  static FockBasis full(int n_modes);
  static FockBasis sector(int n_modes, int n_particles);

  int n_modes() const { return n_modes_; }
  std::optional<int> particle_number() const { return sector_; }
  bool is_full() const { return !sector_.has_value(); }

  int dim() const { return static_cast<int>(states_.size()); }
  std::uint32_t state(int index) const { return states_[index]; }
  // -1 when the bitstring lies outside the basis (wrong particle number).
  int index_of(std::uint32_t bits) const;

 private:
  int n_modes_ = 0;
  std::optional<int> sector_;
  std::vector<std::uint32_t> states_;
  std::vector<int> index_;  // bits -> index, -1 if absent
};

// One factor of a normal-ordered fermionic monomial.
struct MonomialFactor {
  int mode = 0;
  bool dagger = false;
};

// Matrix of a product of creation/annihilation factors (applied right to
// left) with Jordan-Wigner string signs.
Matrix monomial_matrix(const FockBasis& basis, const std::vector<MonomialFactor>& factors);

// Elementary operators on the full basis (odd ones are only defined there).
Matrix creation(const FockBasis& basis, int mode);
Matrix annihilation(const FockBasis& basis, int mode);
Matrix number_operator(const FockBasis& basis, int mode);
Matrix total_number(const FockBasis& basis);
Matrix parity_operator(const FockBasis& basis);

bool is_even(const FockBasis& basis, const Matrix& a, double tol = 1e-12);
bool conserves_number(const FockBasis& basis, const Matrix& a, double tol = 1e-12);

// Embedding of an even operator given on the Fock space of a mode subset
// (modes listed ascending; the sub-operator follows the induced JW order)
// into `basis`.  This realizes the CAR-algebra inclusion, including the
// fermionic gather signs across interleaved outside modes.
Matrix embed(const FockBasis& basis, const std::vector<int>& modes, const Matrix& sub);

// Signed mode-permutation unitary: basis state with occupations n (old mode
// order) maps to the state with mode m's occupation at position perm_pos[m],
// times the fermion-reordering sign.  Full basis only.
Matrix mode_permutation(const FockBasis& basis, const std::vector<int>& perm_pos);

// Index/sign table of the same unitary: column b maps to row index[b] with
// amplitude sign[b].  Lets callers apply the permutation in O(dim^2).
struct ModePermutationTable {
  std::vector<int> index;
  std::vector<double> sign;
};
ModePermutationTable mode_permutation_table(const FockBasis& basis,
                                            const std::vector<int>& perm_pos);

struct GroundState {
  RealVector energies;  // full ascending spectrum
  Vector psi;           // lowest eigenvector
  double energy = 0.0;
  double gap = 0.0;     // E1 - E0
  bool unique = true;   // gap > degeneracy tolerance
};

// Ground state of a Hermitian H on the given basis (dense diagonalization).
GroundState ground_state(const Matrix& h, double degeneracy_tol = 1e-9);

}  // namespace neasslab
