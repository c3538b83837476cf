#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "neasslab/dynamics.hpp"
#include "neasslab/fock.hpp"
#include "neasslab/interaction.hpp"
#include "neasslab/lattice.hpp"
#include "neasslab/neass.hpp"
#include "neasslab/weightfn.hpp"

namespace neasslab {

// Spinless chain building blocks (interaction form; assemble on any basis).

// -amplitude * sum over nearest-neighbor bonds of (c^+_x c_y + h.c.).
Interaction hopping_chain(std::shared_ptr<const Lattice> lat, double amplitude);

// Alternating bond strengths: bonds starting at even x get t_even, odd x
// t_odd (dimerized chain; on an open box the t_even bonds are intracell).
Interaction alternating_hopping(std::shared_ptr<const Lattice> lat, double t_even,
                                double t_odd);

// strength * sum_x (-1)^x n_x.
Interaction staggered_potential(std::shared_ptr<const Lattice> lat, double strength);

// -mu * sum_x n_x.
Interaction chemical_potential(std::shared_ptr<const Lattice> lat, double mu);

// amplitude * sum_{1 <= d <= range} e^{-d} sum_x n_x n_{x+d}.
Interaction density_density(std::shared_ptr<const Lattice> lat, double amplitude,
                            int range);

// sum_x v(x) n_x.
Interaction onsite_potential(std::shared_ptr<const Lattice> lat,
                             const std::function<double(const Site&)>& v);

// sum over bonds (x, x+1) of g(x) (c^+_x c_{x+1} + h.c.).
Interaction bond_modulation(std::shared_ptr<const Lattice> lat,
                            const std::function<double(const Site&)>& g);

struct RampedInteraction {
  Ramp ramp;
  Interaction term;
};

struct ScenarioConfig {
  // lattice
  int length = 8;
  Geometry geometry = Geometry::open_box;

  // reference Hamiltonian
  std::string kind = "staggered_chain";  // or "ssh_chain"
  double hopping = 1.0;
  double hopping_alt = 0.6;  // second bond strength of the dimerized chain
  double stagger = 1.0;
  double mu = 0.0;
  double density_coupling = 0.0;
  int density_range = 1;

  // drive: smooth ramp added on top of one static coupling
  std::string ramp_target = "none";  // "none" | "stagger" | "hopping_alt"
  double ramp_amplitude = 0.0;
  double ramp_on = 0.0;
  double ramp_off = 1.0;

  // perturbation V(t)
  double pert_hopping = 0.0;                 // bond modulation amplitude
  std::string pert_potential = "none";       // "none" | "linear" | "cosine"
  double pert_potential_amplitude = 0.0;
  bool pert_ramped = true;
  double pert_on = 0.0;
  double pert_off = 1.0;

  // band-limited weight
  double gap = 1.0;
  WeightOptions weight;

  // basis
  std::string sector = "half_filling";  // "full" | "half_filling"

  std::uint64_t seed = 1;
};

struct Scenario {
  std::shared_ptr<const Lattice> lattice;
  FockBasis basis;
  std::vector<RampedInteraction> h0_terms;
  std::vector<RampedInteraction> v_terms;
  HamiltonianPath h0;
  HamiltonianPath v;
  WeightFunction weight;
  ScenarioConfig config;

  // Callbacks feeding the expansion builder (theta enters separately).
  NeassInputs neass_inputs() const;
  // H(t) = h0(t) + eps * v(t) as one path.
  HamiltonianPath combined(double eps) const;
};

// Assemble the scenario: lattice, basis, interaction terms, matrix paths and
// weight function.  Throws std::invalid_argument on inconsistent settings
// (e.g. a linear potential on the torus, which no wrap-compatible extension
// supports).
Scenario build_scenario(const ScenarioConfig& cfg);

// Per-site values of the perturbing potential (by site rank) and its exact
// Lipschitz constant with respect to the lattice metric.
std::vector<double> potential_values(const ScenarioConfig& cfg, const Lattice& lat);

}  // namespace neasslab
