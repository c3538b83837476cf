#include <doctest.h>

#include <cmath>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "neasslab/fock.hpp"
#include "neasslab/interaction.hpp"
#include "neasslab/lattice.hpp"
#include "neasslab/linalg.hpp"
#include "neasslab/model.hpp"

using namespace neasslab;

namespace {

std::shared_ptr<const Lattice> chain(int length, Geometry g = Geometry::open_box) {
  return std::make_shared<Lattice>(Lattice::chain(length, g, 1));
}

// Brute-force weighted norm, written independently of the library routine:
// loop over ordered site pairs, re-scan every term for membership of both
// sites, apply the diameter weight and divide by the pair's F-value.
double brute_force_norm(const Interaction& phi, const DecayFunction& zeta, int n,
                        bool l1_metric, int window) {
  const Lattice& lat = phi.lattice();
  std::map<std::pair<int, int>, double> sums;
  for (const auto& [ranks, mat] : phi.terms()) {
    auto supp = phi.support_sites(ranks);
    if (window >= 0) {
      bool inside = true;
      for (const auto& s : supp)
        if (lat.boundary_distance({s}, window) == 0) inside = false;
      if (!inside) continue;
    }
    int diam = 0;
    for (const auto& a : supp)
      for (const auto& b : supp)
        diam = std::max(diam, l1_metric ? lat.l1(a, b) : lat.metric(a, b));
    double w = (n == 0 ? 1.0 : std::pow(double(diam), n)) * op_norm(mat);
    if (w == 0.0) continue;
    for (int x : ranks)
      for (int y : ranks) sums[{x, y}] += w;
  }
  double best = 0.0;
  for (const auto& [pair, value] : sums) {
    double dist = l1_metric ? lat.l1(lat.sites()[pair.first], lat.sites()[pair.second])
                            : lat.metric(lat.sites()[pair.first], lat.sites()[pair.second]);
    double f = zeta(dist) / std::pow(1.0 + dist, lat.dim() + 1);
    best = std::max(best, value / f);
  }
  return best;
}

}  // namespace

TEST_CASE("decay function families") {
  DecayFunction e = DecayFunction::exponential(0.7);
  CHECK(e(2.0) == doctest::Approx(std::exp(-1.4)).epsilon(1e-14));
  DecayFunction e2 = e.powered(2.0);
  CHECK(e2(3.0) == doctest::Approx(std::exp(-4.2)).epsilon(1e-14));

  DecayFunction s = DecayFunction::stretched(1.0, 0.5);
  CHECK(s(4.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));

  DecayFunction p = DecayFunction::power(3.0);
  CHECK(p(1.0) == doctest::Approx(std::pow(2.0, -3.0)).epsilon(1e-14));
  CHECK(p.powered(2.0)(1.0) == doctest::Approx(std::pow(2.0, -6.0)).epsilon(1e-14));

  // all families are monotone decreasing and equal to 1 at the origin
  for (const auto& f : {e, s, p}) {
    CHECK(f(0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f(1.0) > f(2.0));
  }
}

TEST_CASE("envelope sequence and F-function") {
  DecayFunction f = DecayFunction::exponential(1.0);
  double big_r = 2.0;
  // f_j = f^{1/(5 R^2)^j}
  DecayFunction f1 = envelope_sequence(f, 1, big_r);
  CHECK(f1(1.0) == doctest::Approx(std::exp(-1.0 / 20.0)).epsilon(1e-12));
  DecayFunction f2 = envelope_sequence(f, 2, big_r);
  CHECK(f2(1.0) == doctest::Approx(std::exp(-1.0 / 400.0)).epsilon(1e-12));

  CHECK(f_function(f, 1, 3.0) == doctest::Approx(std::exp(-3.0) / 16.0).epsilon(1e-13));
  CHECK(f_function(f, 2, 1.0) == doctest::Approx(std::exp(-1.0) / 8.0).epsilon(1e-13));
}

TEST_CASE("convolution constant against a direct triple loop") {
  auto lat = chain(5);
  DecayFunction zeta = DecayFunction::exponential(1.0);
  double reported = convolution_constant(*lat, zeta);

  double expected = 0.0;
  for (const auto& x : lat->sites())
    for (const auto& y : lat->sites()) {
      double acc = 0.0;
      for (const auto& z : lat->sites())
        acc += f_function(zeta, 1, lat->metric(x, z)) * f_function(zeta, 1, lat->metric(z, y));
      expected = std::max(expected, acc / f_function(zeta, 1, lat->metric(x, y)));
    }
  CHECK(reported == doctest::Approx(expected).epsilon(1e-12));
  CHECK(reported >= 1.0);
}

TEST_CASE("terms accumulate on a shared support") {
  auto lat = chain(4);
  Interaction phi(lat);
  FockBasis pairb = FockBasis::full(2);
  Matrix n0 = number_operator(pairb, 0);
  std::vector<Site> supp = {Site{0, 0}, Site{1, 0}};
  phi.add_term(supp, n0);
  phi.add_term(supp, n0);
  CHECK(phi.n_terms() == 1);

  FockBasis basis = FockBasis::full(4);
  Matrix direct = 2.0 * number_operator(basis, 2);  // site 0 has rank 2 on {-2..1}
  CHECK(op_norm(phi.assemble(basis) - direct) <= 1e-13);
}

TEST_CASE("assembled hopping chain matches explicit JW products") {
  auto lat = chain(4);
  Interaction phi = hopping_chain(lat, 0.8);
  FockBasis basis = FockBasis::full(4);
  Matrix direct = Matrix::Zero(basis.dim(), basis.dim());
  for (int m = 0; m + 1 < 4; ++m) {
    Matrix hop = creation(basis, m) * annihilation(basis, m + 1);
    direct -= 0.8 * (hop + hop.adjoint().eval());
  }
  CHECK(op_norm(phi.assemble(basis) - direct) <= 1e-12);
}

TEST_CASE("interaction norms match the brute-force enumeration") {
  auto lat = chain(6);
  DecayFunction zeta = DecayFunction::exponential(1.0);

  Interaction hop = hopping_chain(lat, 1.0);
  Interaction stag = staggered_potential(lat, 0.5);
  Interaction dens = density_density(lat, 0.3, 2);
  Interaction mixed = hop;
  mixed += stag;
  mixed += dens;

  for (const Interaction* phi : {&hop, &stag, &dens, &mixed}) {
    for (int n : {0, 1, 2}) {
      // bit-for-bit equality: the accumulation order is the map order in
      // both paths, so not even roundoff may differ
      CHECK(interaction_norm(*phi, zeta, n) ==
            brute_force_norm(*phi, zeta, n, false, -1));
      CHECK(bulk_norm(*phi, zeta, n, 2) == brute_force_norm(*phi, zeta, n, true, 2));
    }
  }
}

TEST_CASE("frozen two-term norm value") {
  auto lat = chain(4);
  Interaction phi(lat);
  FockBasis pairb = FockBasis::full(2);
  Matrix nn = number_operator(pairb, 0) * number_operator(pairb, 1);
  phi.add_term({Site{0, 0}, Site{1, 0}}, 2.0 * nn);

  // one term of operator norm 2 on a diameter-1 support: the (0, 1) pair
  // dominates with 2 / F(1) = 2 * 4 * e
  DecayFunction zeta = DecayFunction::exponential(1.0);
  CHECK(interaction_norm(phi, zeta, 0) ==
        doctest::Approx(8.0 * std::exp(1.0)).epsilon(1e-13));
  // n = 1 multiplies by diam^1 = 1, so nothing changes
  CHECK(interaction_norm(phi, zeta, 1) ==
        doctest::Approx(8.0 * std::exp(1.0)).epsilon(1e-13));
}

TEST_CASE("commutator interaction assembles to the true commutator") {
  auto lat = chain(5);
  Interaction a = hopping_chain(lat, 1.0);
  Interaction b = staggered_potential(lat, 0.7);
  b += density_density(lat, 0.2, 1);

  Interaction comm = commutator_interaction(a, b);
  FockBasis basis = FockBasis::full(5);
  Matrix am = a.assemble(basis), bm = b.assemble(basis);
  Matrix expected = am * bm - bm * am;
  Matrix got = Complex(0.0, 1.0) * comm.assemble(basis);
  CHECK(op_norm(got - expected) <= 1e-12);

  // disjoint single-site terms commute exactly and are dropped
  Interaction n1(lat), n2(lat);
  FockBasis single = FockBasis::full(1);
  n1.add_term({Site{-2, 0}}, number_operator(single, 0));
  n2.add_term({Site{2, 0}}, number_operator(single, 0));
  CHECK(commutator_interaction(n1, n2).n_terms() == 0);
}

TEST_CASE("lipschitz potentials") {
  auto lat = chain(5);
  std::vector<double> v;
  for (const auto& s : lat->sites()) v.push_back(0.3 * s[0]);
  CHECK(lipschitz_constant(*lat, v) == doctest::Approx(0.3).epsilon(1e-13));

  std::vector<double> spike(lat->n_sites(), 0.0);
  spike[0] = 2.0;  // jump of 2 over distance 1 to its neighbor
  CHECK(lipschitz_constant(*lat, spike) == doctest::Approx(2.0).epsilon(1e-13));

  // V_v assembles to sum v(x) n_x
  Interaction vv = lipschitz_operator(lat, v);
  FockBasis basis = FockBasis::full(5);
  Matrix direct = Matrix::Zero(basis.dim(), basis.dim());
  for (int m = 0; m < 5; ++m) direct += v[m] * number_operator(basis, m);
  CHECK(op_norm(vv.assemble(basis) - direct) <= 1e-13);

  Interaction hop = hopping_chain(lat, 1.0);
  auto lc = lipschitz_commutator(hop, v, DecayFunction::exponential(1.0), 0);
  CHECK(lc.norm_lhs <= lc.norm_bound + 1e-12);
  CHECK(lc.norm_lhs > 0.0);
  Matrix direct_comm = hop.assemble(basis) * direct - direct * hop.assemble(basis);
  CHECK(op_norm(Matrix(Complex(0.0, 1.0) * lc.interaction.assemble(basis)) - direct_comm) <= 1e-12);
}

TEST_CASE("rapid thermodynamic limit report") {
  RapidTdlOptions opt;
  opt.gamma = 0.5;
  opt.lambda = 1.0;
  opt.n = 0;
  opt.zeta_norm = DecayFunction::exponential(1.0);
  opt.zeta_decay = DecayFunction::exponential(1.0);
  opt.window_radii = {1, 2};

  auto open_box_family = [](int k) {
    return std::make_shared<Lattice>(Lattice(1, k, Geometry::open_box, 1));
  };

  SUBCASE("restriction families are exactly Cauchy") {
    InteractionFamily fam = [&](int k, double) {
      return hopping_chain(open_box_family(k), 1.0);
    };
    auto rep = rapid_tdl_report(fam, {2, 3, 4, 5}, opt);
    REQUIRE(!rep.rows.empty());
    for (const auto& row : rep.rows) CHECK(row.sup_diff == 0.0);
    CHECK(rep.fitted_constant == 0.0);
    CHECK(rep.verdict);
  }

  SUBCASE("volume-dependent couplings are flagged") {
    // couplings alternate along the radius list, so consecutive volumes
    // disagree by a fixed amount while the decay budget keeps shrinking
    std::vector<int> radii = {4, 6, 8, 10};
    InteractionFamily fam = [&](int k, double) {
      size_t pos = 0;
      while (pos + 1 < radii.size() && radii[pos] != k) ++pos;
      return hopping_chain(open_box_family(k), 1.0 + 0.2 * (pos % 2));
    };
    RapidTdlOptions drift_opt = opt;
    drift_opt.gamma = 0.8;
    drift_opt.window_radii = {1, 2, 3};
    auto rep = rapid_tdl_report(fam, radii, drift_opt);
    CHECK(rep.fitted_constant > 0.0);
    CHECK(!rep.verdict);
  }

  SUBCASE("rows only use volumes beyond the eligibility margin") {
    InteractionFamily fam = [&](int k, double) {
      return hopping_chain(open_box_family(k), 1.0);
    };
    auto rep = rapid_tdl_report(fam, {2, 3, 4, 5}, opt);
    for (const auto& row : rep.rows) {
      double margin = row.window_radius + opt.lambda * std::pow(row.window_radius, opt.gamma);
      CHECK(double(row.k) >= margin);
      CHECK(double(row.l) >= margin);
      CHECK(row.decay_value ==
            doctest::Approx(opt.zeta_decay(std::pow(row.window_radius, opt.gamma))).epsilon(1e-13));
    }
  }
}
