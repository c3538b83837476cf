#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "neasslab/fock.hpp"
#include "neasslab/lattice.hpp"
#include "neasslab/linalg.hpp"

namespace neasslab {

// Infinitely flat monotone switch: 0 for t <= 0, 1 for t >= 1, all
// derivatives vanishing at both endpoints.
double smooth_step(double t);
double smooth_step_derivative(double t);

struct Ramp {
  enum class Kind { constant, smooth };
  Kind kind = Kind::constant;
  double t_on = 0.0;
  double t_off = 1.0;
  double amplitude = 1.0;

  double value(double t) const;
  double derivative(double t) const;  // analytic, not finite-differenced

  static Ramp constant(double amplitude = 1.0);
  static Ramp smooth(double t_on, double t_off, double amplitude = 1.0);
};

// H(t) = base + sum_k ramp_k(t) * term_k with analytic time derivative.
struct HamiltonianPath {
  Matrix base;
  std::vector<std::pair<Ramp, Matrix>> ramped;

  int dim() const { return static_cast<int>(base.rows()); }
  bool time_dependent() const;
  Matrix at(double t) const;
  Matrix dot(double t) const;
};

struct PropagateOptions {
  int steps_per_unit = 200;        // per unit of rescaled time |t1 - t0| / eta
  std::optional<int> total_steps;  // overrides steps_per_unit
  bool verify_doubling = false;    // re-run at half resolution, record defect
};

struct Propagation {
  Matrix u;  // U(t1, t0)
  double t0 = 0.0, t1 = 0.0, eta = 1.0;
  int steps = 0;
  double doubling_defect = -1.0;  // ||U_N - U_{N/2}||; -1 when not measured
};

// Solve i eta dU/dt = H(t) U by midpoint-frozen exponential steps.  A
// time-independent path collapses to a single exact exponential.
Propagation propagate(const HamiltonianPath& h, double t0, double t1, double eta,
                      const PropagateOptions& opt = PropagateOptions{});

struct StatePropagation {
  Vector psi;
  double t0 = 0.0, t1 = 0.0, eta = 1.0;
  int steps = 0;
  double doubling_defect = -1.0;  // 2-norm of psi_N - psi_{N/2}
};

// Same stepping applied to one state, with each step's exponential applied
// through an adaptive Lanczos subspace instead of a full eigendecomposition.
StatePropagation propagate_state(const HamiltonianPath& h, const Vector& psi0,
                                 double t0, double t1, double eta,
                                 const PropagateOptions& opt = PropagateOptions{});

inline Matrix heisenberg(const Matrix& u, const Matrix& a) {
  return u.adjoint() * a * u;
}

struct LrScanResult {
  std::vector<double> times;
  std::vector<int> distances;
  Eigen::MatrixXd norms;     // times x distances: ||[tau_t(A), B_d]||
  double threshold = 0.0;
  double fitted_velocity = 0.0;  // slope of distance against first-crossing time
  int crossings = 0;
};

// Heisenberg commutator scan for a time-independent H: evolves A in the
// eigenbasis and records ||[tau_t(A), B]|| for each probe operator.
LrScanResult lr_commutator_scan(const Matrix& h, const Matrix& a,
                                const std::vector<Matrix>& probes,
                                const std::vector<int>& distances,
                                const std::vector<double>& times, double threshold);

// One member of a nested family of boxes carrying a Hamiltonian on its full
// Fock basis.
struct VolumePoint {
  std::shared_ptr<const Lattice> lattice;
  Matrix h;
};

struct VolumeConvergence {
  std::vector<int> radii;              // box radius per family member
  std::vector<double> diff_norms;      // ||tau^{l}_t(A) - tau^{k}_t(A)||, consecutive pairs
  std::vector<double> boundary_dists;  // dist of supp A to the smaller box's complement
  std::vector<double> zeta_values;     // exp(-dist^gamma) at those distances
  double gamma = 0.9;
  double fitted_rate = 0.0;  // least-squares rate of log diff against dist^gamma
  bool superpolynomial = false;
};

// Evolves a local even operator in every volume of a nested family and
// compares consecutive volumes inside the larger one.  The verdict asks
// whether the decay of the differences beats the power law fitted to the
// first pair (or whether everything vanishes outright).
VolumeConvergence volume_convergence(const std::vector<VolumePoint>& family,
                                     const std::vector<Site>& support,
                                     const Matrix& a_local, double t, double eta,
                                     double gamma,
                                     const PropagateOptions& opt = PropagateOptions{});

}  // namespace neasslab
