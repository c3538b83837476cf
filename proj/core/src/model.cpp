#include "neasslab/model.hpp"

#include <cmath>
#include <stdexcept>

namespace neasslab {

namespace {

void require_chain(const Lattice& lat, const char* who) {
  if (lat.dim() != 1 || lat.spin() != 1)
    throw std::invalid_argument(std::string(who) + ": spinless chain required");
}

// Local two-mode matrices in the induced Jordan-Wigner order; embed() adds
// the global string signs.
Matrix local_hop() {
  FockBasis b2 = FockBasis::full(2);
  Matrix c0 = creation(b2, 0), c1 = creation(b2, 1);
  Matrix hop = c0 * c1.adjoint() + c1 * c0.adjoint();
  return hop;
}

Matrix local_nn() {
  FockBasis b2 = FockBasis::full(2);
  return number_operator(b2, 0) * number_operator(b2, 1);
}

Matrix local_n() {
  FockBasis b1 = FockBasis::full(1);
  return number_operator(b1, 0);
}

// Bonds (x, x+1) of the chain; on the torus the wrap bond appears once.
std::vector<std::pair<Site, Site>> chain_bonds(const Lattice& lat) {
  std::vector<std::pair<Site, Site>> bonds;
  for (const Site& s : lat.sites()) {
    Site t = s;
    t[0] = s[0] + 1;
    if (!lat.contains(t)) {
      if (lat.geometry() == Geometry::torus) {
        t[0] = lat.lo(0);
        bonds.emplace_back(s, t);
      }
      continue;
    }
    bonds.emplace_back(s, t);
  }
  return bonds;
}

}  // namespace

Interaction hopping_chain(std::shared_ptr<const Lattice> lat, double amplitude) {
  require_chain(*lat, "hopping_chain");
  Interaction phi(lat);
  if (amplitude == 0.0) return phi;
  const Matrix hop = local_hop();
  for (const auto& [a, b] : chain_bonds(*lat))
    phi.add_term({a, b}, -amplitude * hop);
  return phi;
}

Interaction alternating_hopping(std::shared_ptr<const Lattice> lat, double t_even,
                                double t_odd) {
  require_chain(*lat, "alternating_hopping");
  Interaction phi(lat);
  const Matrix hop = local_hop();
  for (const auto& [a, b] : chain_bonds(*lat)) {
    // Python-style floor modulo keeps the sublattice pattern stable across 0.
    const int parity = ((a[0] % 2) + 2) % 2;
    const double t = parity == 0 ? t_even : t_odd;
    if (t != 0.0) phi.add_term({a, b}, -t * hop);
  }
  return phi;
}

Interaction staggered_potential(std::shared_ptr<const Lattice> lat, double strength) {
  require_chain(*lat, "staggered_potential");
  Interaction phi(lat);
  if (strength == 0.0) return phi;
  const Matrix n = local_n();
  for (const Site& s : lat->sites()) {
    const int parity = ((s[0] % 2) + 2) % 2;
    phi.add_term({s}, (parity == 0 ? strength : -strength) * n);
  }
  return phi;
}

Interaction chemical_potential(std::shared_ptr<const Lattice> lat, double mu) {
  require_chain(*lat, "chemical_potential");
  Interaction phi(lat);
  if (mu == 0.0) return phi;
  const Matrix n = local_n();
  for (const Site& s : lat->sites()) phi.add_term({s}, -mu * n);
  return phi;
}

Interaction density_density(std::shared_ptr<const Lattice> lat, double amplitude,
                            int range) {
  require_chain(*lat, "density_density");
  if (range < 1) throw std::invalid_argument("density_density: range must be >= 1");
  Interaction phi(lat);
  if (amplitude == 0.0) return phi;
  const Matrix nn = local_nn();
  const auto& sites = lat->sites();
  // Each unordered pair once, at its metric distance (wrap-aware on the torus).
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (std::size_t j = i + 1; j < sites.size(); ++j) {
      const int d = lat->metric(sites[i], sites[j]);
      if (d < 1 || d > range) continue;
      phi.add_term({sites[i], sites[j]}, amplitude * std::exp(-d) * nn);
    }
  }
  return phi;
}

Interaction onsite_potential(std::shared_ptr<const Lattice> lat,
                             const std::function<double(const Site&)>& v) {
  require_chain(*lat, "onsite_potential");
  Interaction phi(lat);
  const Matrix n = local_n();
  for (const Site& s : lat->sites()) {
    const double val = v(s);
    if (val != 0.0) phi.add_term({s}, val * n);
  }
  return phi;
}

Interaction bond_modulation(std::shared_ptr<const Lattice> lat,
                            const std::function<double(const Site&)>& g) {
  require_chain(*lat, "bond_modulation");
  Interaction phi(lat);
  const Matrix hop = local_hop();
  for (const auto& [a, b] : chain_bonds(*lat)) {
    const double val = g(a);
    if (val != 0.0) phi.add_term({a, b}, val * hop);
  }
  return phi;
}

std::vector<double> potential_values(const ScenarioConfig& cfg, const Lattice& lat) {
  std::vector<double> v(lat.n_sites(), 0.0);
  if (cfg.pert_potential == "none" || cfg.pert_potential_amplitude == 0.0) return v;
  const auto& sites = lat.sites();
  if (cfg.pert_potential == "linear") {
    if (lat.geometry() == Geometry::torus)
      throw std::invalid_argument(
          "potential_values: linear potential is not wrap-compatible on the torus");
    for (std::size_t i = 0; i < sites.size(); ++i)
      v[i] = cfg.pert_potential_amplitude * sites[i][0];
    return v;
  }
  if (cfg.pert_potential == "cosine") {
    const double k = 2.0 * M_PI / lat.length(0);
    for (std::size_t i = 0; i < sites.size(); ++i)
      v[i] = cfg.pert_potential_amplitude * std::cos(k * sites[i][0]);
    return v;
  }
  throw std::invalid_argument("potential_values: unknown potential kind '" +
                              cfg.pert_potential + "'");
}

namespace {

HamiltonianPath path_from_terms(const FockBasis& basis,
                                const std::vector<RampedInteraction>& terms, int dim) {
  HamiltonianPath path;
  path.base = Matrix::Zero(dim, dim);
  for (const auto& rt : terms) {
    Matrix m = rt.term.assemble(basis);
    if (rt.ramp.kind == Ramp::Kind::constant) {
      path.base += rt.ramp.amplitude * m;
    } else {
      path.ramped.emplace_back(rt.ramp, std::move(m));
    }
  }
  return path;
}

}  // namespace

NeassInputs Scenario::neass_inputs() const {
  NeassInputs in;
  in.h0 = [this](double t) { return h0.at(t); };
  in.h0_dot = [this](double t) { return h0.dot(t); };
  in.v = [this](double t) { return v.at(t); };
  return in;
}

HamiltonianPath Scenario::combined(double eps) const {
  HamiltonianPath path = h0;
  path.base += eps * v.base;
  for (const auto& [ramp, mat] : v.ramped) path.ramped.emplace_back(ramp, eps * mat);
  return path;
}

Scenario build_scenario(const ScenarioConfig& cfg) {
  if (cfg.length < 2 || cfg.length % 2 != 0)
    throw std::invalid_argument("build_scenario: length must be even and >= 2");
  if (cfg.gap <= 0.0) throw std::invalid_argument("build_scenario: gap must be positive");

  auto lat = std::make_shared<Lattice>(Lattice::chain(cfg.length, cfg.geometry, 1));

  Scenario sc;
  sc.lattice = lat;
  sc.config = cfg;

  if (cfg.sector == "full") {
    sc.basis = FockBasis::full(lat->n_modes());
  } else if (cfg.sector == "half_filling") {
    sc.basis = FockBasis::sector(lat->n_modes(), lat->n_modes() / 2);
  } else {
    throw std::invalid_argument("build_scenario: unknown sector '" + cfg.sector + "'");
  }

  // Reference Hamiltonian terms.
  if (cfg.kind == "staggered_chain") {
    sc.h0_terms.push_back({Ramp::constant(), hopping_chain(lat, cfg.hopping)});
    sc.h0_terms.push_back({Ramp::constant(), staggered_potential(lat, cfg.stagger)});
  } else if (cfg.kind == "ssh_chain") {
    sc.h0_terms.push_back(
        {Ramp::constant(), alternating_hopping(lat, cfg.hopping, cfg.hopping_alt)});
  } else {
    throw std::invalid_argument("build_scenario: unknown model kind '" + cfg.kind + "'");
  }
  if (cfg.mu != 0.0)
    sc.h0_terms.push_back({Ramp::constant(), chemical_potential(lat, cfg.mu)});
  if (cfg.density_coupling != 0.0)
    sc.h0_terms.push_back({Ramp::constant(),
                           density_density(lat, cfg.density_coupling, cfg.density_range)});

  if (cfg.ramp_target != "none") {
    if (cfg.ramp_amplitude == 0.0)
      throw std::invalid_argument("build_scenario: ramp_target set but amplitude is 0");
    Ramp ramp = Ramp::smooth(cfg.ramp_on, cfg.ramp_off, cfg.ramp_amplitude);
    if (cfg.ramp_target == "stagger") {
      if (cfg.kind != "staggered_chain")
        throw std::invalid_argument("build_scenario: stagger ramp needs staggered_chain");
      sc.h0_terms.push_back({ramp, staggered_potential(lat, 1.0)});
    } else if (cfg.ramp_target == "hopping_alt") {
      if (cfg.kind != "ssh_chain")
        throw std::invalid_argument("build_scenario: hopping_alt ramp needs ssh_chain");
      sc.h0_terms.push_back({ramp, alternating_hopping(lat, 0.0, 1.0)});
    } else {
      throw std::invalid_argument("build_scenario: unknown ramp_target '" +
                                  cfg.ramp_target + "'");
    }
  }

  // Perturbation terms.
  Ramp pert_ramp = cfg.pert_ramped ? Ramp::smooth(cfg.pert_on, cfg.pert_off, 1.0)
                                   : Ramp::constant(1.0);
  if (cfg.pert_hopping != 0.0) {
    sc.v_terms.push_back(
        {pert_ramp, bond_modulation(lat, [&](const Site&) { return cfg.pert_hopping; })});
  }
  if (cfg.pert_potential != "none" && cfg.pert_potential_amplitude != 0.0) {
    std::vector<double> vals = potential_values(cfg, *lat);
    sc.v_terms.push_back({pert_ramp, lipschitz_operator(lat, vals)});
  }

  const int dim = sc.basis.dim();
  sc.h0 = path_from_terms(sc.basis, sc.h0_terms, dim);
  sc.v = path_from_terms(sc.basis, sc.v_terms, dim);
  sc.weight = WeightFunction::build(cfg.gap, cfg.weight);
  return sc;
}

}  // namespace neasslab
