#pragma once

#include <vector>

#include "neasslab/fock.hpp"
#include "neasslab/interaction.hpp"
#include "neasslab/lattice.hpp"

namespace neasslab {

// Conditional expectation onto the subalgebra of the listed modes: the
// normalized partial trace over the complementary modes tensored with the
// identity.  Defined on even operators (full basis); realized by reordering
// the kept modes to the low positions with the fermionic permutation sign,
// tracing the rest, and reordering back.
Matrix conditional_expectation(const FockBasis& basis, const Matrix& a,
                               const std::vector<int>& kept_modes);

// Convenience: kept modes = all modes of sites in the centered window
// Lambda_M intersected with the lattice.
Matrix conditional_expectation_window(const Lattice& lat, const FockBasis& basis,
                                      const Matrix& a, int window_radius);

// ||A||_f = ||A|| + max_k ||(1 - E_k)(A)|| / f(k) over window radii covering
// the box.  f must be positive on the sampled range.
double f_norm(const Lattice& lat, const FockBasis& basis, const Matrix& a,
              const DecayFunction& f);

struct LocalizationProfile {
  std::vector<int> radii;
  std::vector<double> residuals;   // ||(1 - E_k)(A)||
  double slope_linear = 0.0;       // LS slope of log r_k against k
  double slope_stretched = 0.0;    // LS slope of log r_k against k^gamma
  double gamma = 0.9;
};

LocalizationProfile localization_profile(const Lattice& lat, const FockBasis& basis,
                                         const Matrix& a, double gamma = 0.9);

// Telescoping decomposition of A into shells around X: layer 0 is the
// expectation onto fatten(X, delta0), layer j the increment between
// consecutive fattenings, so the layers sum to A exactly.
struct ConeDecomposition {
  std::vector<Matrix> layers;
  std::vector<int> radii;          // fattening radius per layer
  std::vector<double> layer_norms;
};

ConeDecomposition cone_decomposition(const Lattice& lat, const FockBasis& basis,
                                     const Matrix& a, const std::vector<Site>& x,
                                     int delta0, int step);

}  // namespace neasslab
