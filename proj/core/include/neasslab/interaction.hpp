#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "neasslab/fock.hpp"
#include "neasslab/lattice.hpp"
#include "neasslab/linalg.hpp"

namespace neasslab {

// Monotone decay profile zeta(r) used both for interaction weights and for
// localization envelopes.  All supported families are closed under taking
// real powers, which the nested-envelope constructions rely on.
struct DecayFunction {
  enum class Kind { exponential, stretched, power };
  Kind kind = Kind::exponential;
  double a = 1.0;      // rate (exponential/stretched) or exponent p (power)
  double gamma = 1.0;  // stretching exponent, stretched only

  double operator()(double r) const;
  DecayFunction powered(double c) const;  // pointwise zeta(r)^c
  std::string describe() const;

  static DecayFunction exponential(double a);
  static DecayFunction stretched(double a, double gamma);
  static DecayFunction power(double p);
};

// Envelope sequence f_j = f^(1/(5R^2)^j) for nested localization estimates.
DecayFunction envelope_sequence(const DecayFunction& f, int j, double big_r);

// F-function of the lattice dimension: F_zeta(r) = zeta(r) / (1+r)^(dim+1).
double f_function(const DecayFunction& zeta, int dim, double r);

// Convolution constant C_zeta = sup_{x,y} sum_z F(d(x,z)) F(d(z,y)) / F(d(x,y))
// evaluated over the finite box with its host metric.
double convolution_constant(const Lattice& lat, const DecayFunction& zeta);

// A finite-range interaction: map from canonical supports (sorted site-rank
// lists) to even self-adjoint terms on the support's Fock space.
class Interaction {
 public:
  explicit Interaction(std::shared_ptr<const Lattice> lat);

  const Lattice& lattice() const { return *lat_; }
  std::shared_ptr<const Lattice> lattice_ptr() const { return lat_; }

  // Adds (accumulates) a term.  The matrix lives on the Fock space of the
  // support's modes in ascending mode order; it must be even and Hermitian.
  void add_term(const std::vector<Site>& support, const Matrix& term);

  std::size_t n_terms() const { return terms_.size(); }
  const std::map<std::vector<int>, Matrix>& terms() const { return terms_; }

  std::vector<Site> support_sites(const std::vector<int>& ranks) const;
  std::vector<int> support_modes(const std::vector<int>& ranks) const;

  // Sum of embedded terms on a basis over the whole lattice.
  Matrix assemble(const FockBasis& basis) const;

  Interaction& operator+=(const Interaction& other);
  Interaction scaled(double c) const;

 private:
  std::shared_ptr<const Lattice> lat_;
  std::map<std::vector<int>, Matrix> terms_;
};

// Weighted interaction norm
//   sup_{x,y} sum_{X contains x,y} diam(X)^n ||Phi(X)|| / F_zeta(d(x,y))
// with the host metric of the lattice; diam^0 is 1 by convention (also for
// single-site supports), while n >= 1 uses the literal power.
double interaction_norm(const Interaction& phi, const DecayFunction& zeta, int n);

// Same sum restricted to supports inside the centered window Lambda_M, with
// the l1 metric for both diameters and distances.
double bulk_norm(const Interaction& phi, const DecayFunction& zeta, int n,
                 int window_radius);

// Lipschitz constant sup_{x != y} |v(x) - v(y)| / d(x, y); v indexed by site rank.
double lipschitz_constant(const Lattice& lat, const std::vector<double>& v);

// V_v = sum_x v(x) sum_sigma n_{x,sigma} as an on-site interaction.
Interaction lipschitz_operator(std::shared_ptr<const Lattice> lat,
                               const std::vector<double>& v);

// Interaction built from the pairwise commutators [A(X), B(Y)] on X union Y
// (disjoint even terms commute exactly and are dropped), stored with a factor
// -i so each term is self-adjoint: i * assemble(result) = [assemble(a),
// assemble(b)].
Interaction commutator_interaction(const Interaction& a, const Interaction& b);

// Commutator with a Lipschitz potential, plus the closed-form norm bound
// kappa * C_v * spin * ||a||_{zeta, n+dim+1} it is checked against.  Per term
// with support X, ||[V, a_X]|| <= 0.5 * C_v * spin * |X| * diam(X) * ||a_X||
// (recenter v at the midpoint of its range on X; requires number-conserving
// terms so that the recentering constant drops out), and the site count is
// absorbed into the diameter power via |X| <= (diam+1)^d <= 2^d diam^d on an
// open box, (2 diam+1)^d <= 3^d diam^d on the torus, so kappa = 2^d / 2 or
// 3^d / 2.  A nearest-neighbor bond saturates the open-box bound exactly.
struct LipschitzCommutator {
  Interaction interaction;
  double norm_lhs = 0.0;   // ||[A, V_v]||_{zeta, n}
  double norm_bound = 0.0; // kappa * C_v * spin * ||A||_{zeta, n+dim+1}
};
LipschitzCommutator lipschitz_commutator(const Interaction& a,
                                         const std::vector<double>& v,
                                         const DecayFunction& zeta, int n);

// Cauchy-type decay report for a family of interactions indexed by box size:
// for every window M and pair k, l >= M + lambda * M^gamma, the bulk norm of
// the difference must stay below a fitted constant times zeta_decay(M^gamma).
struct RapidTdlOptions {
  double gamma = 0.5;
  double lambda = 1.0;
  int n = 0;
  DecayFunction zeta_norm = DecayFunction::exponential(1.0);
  DecayFunction zeta_decay = DecayFunction::exponential(1.0);
  std::vector<int> window_radii;
  std::vector<double> t_samples = {0.0};
};

struct RapidTdlRow {
  int window_radius = 0;
  int k = 0;
  int l = 0;
  double sup_diff = 0.0;   // sup over t samples
  double decay_value = 0.0;  // zeta_decay(M^gamma)
  double ratio = 0.0;
};

struct RapidTdlReport {
  std::vector<RapidTdlRow> rows;
  double fitted_constant = 0.0;  // max ratio
  bool verdict = false;          // ratios bounded (non-growing) over the window list
};

using InteractionFamily = std::function<Interaction(int box_radius, double t)>;

RapidTdlReport rapid_tdl_report(const InteractionFamily& family,
                                const std::vector<int>& box_radii,
                                const RapidTdlOptions& opt);

}  // namespace neasslab
