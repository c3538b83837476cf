#include <doctest.h>

#include <cmath>
#include <vector>

#include "neasslab/fock.hpp"
#include "neasslab/linalg.hpp"
#include "neasslab/model.hpp"
#include "neasslab/neass.hpp"
#include "neasslab/rng.hpp"
#include "neasslab/weightfn.hpp"

using namespace neasslab;

namespace {

Matrix random_hermitian(int dim, std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream);
  Matrix a(dim, dim);
  std::uint64_t ctr = 0;
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) a(r, c) = Complex(rng.normal(ctr++), rng.normal(ctr++));
  a = 0.5 * (a + a.adjoint().eval());
  // unit norm keeps the eps^4 truncation tail of order-3 series below 1e-3
  return a / op_norm(a);
}

Matrix series_sum(const OperatorSeries& s, double eps) {
  Matrix acc = Matrix::Zero(s.c[0].rows(), s.c[0].cols());
  double p = 1.0;
  for (const Matrix& c : s.c) {
    acc += p * c;
    p *= eps;
  }
  return acc;
}

}  // namespace

TEST_CASE("conjugation series matches the exact conjugation") {
  const int dim = 6, order = 3;
  Matrix p1 = random_hermitian(dim, 51, 0);
  Matrix x0 = random_hermitian(dim, 51, 1);

  OperatorSeries p = OperatorSeries::zero(order, dim);
  p.c[1] = p1;
  OperatorSeries x = OperatorSeries::zero(order, dim);
  x.c[0] = x0;

  OperatorSeries conj = conjugation_series(p, x, order);
  REQUIRE(conj.max_order() == order);
  CHECK(op_norm(conj.c[0] - x0) <= 1e-14);
  Matrix comm = p1 * x0 - x0 * p1;
  CHECK(op_norm(conj.c[1] - Matrix(Complex(0.0, -1.0) * comm)) <= 1e-13);

  auto exact = [&](double eps) {
    Matrix u = herm_exp(Matrix(eps * p1), -1.0);  // e^{-i eps P}
    return Matrix(u * x0 * u.adjoint());
  };
  double e1 = op_norm(series_sum(conj, 0.1) - exact(0.1));
  double e2 = op_norm(series_sum(conj, 0.05) - exact(0.05));
  CHECK(e1 <= 1e-3);
  // truncation error of an order-3 polynomial scales like eps^4
  CHECK(e2 <= e1 / 10.0);
}

TEST_CASE("conjugation series with a multi-order generator") {
  const int dim = 5, order = 3;
  Matrix p1 = random_hermitian(dim, 53, 0);
  Matrix p2 = random_hermitian(dim, 53, 1);
  Matrix x0 = random_hermitian(dim, 53, 2);
  Matrix x1 = random_hermitian(dim, 53, 3);

  OperatorSeries p = OperatorSeries::zero(order, dim);
  p.c[1] = p1;
  p.c[2] = p2;
  OperatorSeries x = OperatorSeries::zero(order, dim);
  x.c[0] = x0;
  x.c[1] = x1;

  OperatorSeries conj = conjugation_series(p, x, order);
  auto exact = [&](double eps) {
    Matrix m = eps * p1 + eps * eps * p2;
    Matrix u = herm_exp(m, -1.0);
    return Matrix(u * Matrix(x0 + eps * x1) * u.adjoint());
  };
  double e1 = op_norm(series_sum(conj, 0.1) - exact(0.1));
  double e2 = op_norm(series_sum(conj, 0.05) - exact(0.05));
  CHECK(e1 <= 1e-3);
  CHECK(e2 <= e1 / 10.0);
}

TEST_CASE("averaged conjugation matches its integral form") {
  const int dim = 5, order = 3;
  Matrix p1 = random_hermitian(dim, 57, 0);
  Matrix x0 = random_hermitian(dim, 57, 1);

  OperatorSeries p = OperatorSeries::zero(order, dim);
  p.c[1] = p1;
  OperatorSeries x = OperatorSeries::zero(order, dim);
  x.c[0] = x0;

  OperatorSeries avg = averaged_conjugation_series(p, x, order);
  Matrix comm = p1 * x0 - x0 * p1;
  CHECK(op_norm(avg.c[0] - x0) <= 1e-14);
  CHECK(op_norm(avg.c[1] - Matrix(Complex(0.0, -0.5) * comm)) <= 1e-13);

  auto integral = [&](double eps) {
    // Simpson rule for int_0^1 e^{-i l eps P} X e^{i l eps P} dl
    const int n = 128;
    Matrix acc = Matrix::Zero(dim, dim);
    for (int i = 0; i <= n; ++i) {
      double lambda = double(i) / n;
      double wgt = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      Matrix u = herm_exp(Matrix(lambda * eps * p1), -1.0);
      acc += wgt * Matrix(u * x0 * u.adjoint());
    }
    return Matrix(acc / (3.0 * n));
  };
  double e1 = op_norm(series_sum(avg, 0.1) - integral(0.1));
  double e2 = op_norm(series_sum(avg, 0.05) - integral(0.05));
  CHECK(e1 <= 1e-3);
  CHECK(e2 <= e1 / 10.0);
}

TEST_CASE("dressing bundle on a driven gapped chain") {
  ScenarioConfig cfg;
  cfg.length = 4;
  cfg.stagger = 1.0;
  cfg.gap = 1.0;
  cfg.sector = "half_filling";
  cfg.ramp_target = "stagger";
  cfg.ramp_amplitude = 0.5;
  cfg.pert_potential = "cosine";
  cfg.pert_potential_amplitude = 0.2;
  Scenario sc = build_scenario(cfg);

  NeassBundle b = build_neass(sc.neass_inputs(), sc.weight, 0.5, 1.0, 3);
  CHECK(b.order == 3);
  CHECK(b.t == 0.5);
  CHECK(b.theta == 1.0);
  CHECK(b.gap_ok);
  CHECK(b.gap >= sc.weight.gap());
  REQUIRE(b.a_ops.size() == 3);
  REQUIRE(b.split_residuals.size() == 3);

  for (const Matrix& a : b.a_ops) CHECK(is_hermitian(a, 1e-9));
  for (double r : b.split_residuals) CHECK(r <= 1e-9);

  const double eps = 0.1;
  Matrix s = b.s_matrix(eps);
  Matrix expected = b.a_ops[0] + eps * b.a_ops[1] + eps * eps * b.a_ops[2];
  CHECK(op_norm(s - expected) <= 1e-12);

  Matrix d = b.dressing(eps);
  Matrix id = Matrix::Identity(d.rows(), d.cols());
  CHECK(op_norm(Matrix(d.adjoint() * d) - id) <= 1e-12);
  CHECK(op_norm(d - herm_exp(s, eps)) <= 1e-12);

  GroundState gs = ground_state(sc.h0.at(0.5));
  Vector dressed = b.dress(gs.psi, eps);
  CHECK(dressed.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((Vector(d * gs.psi) - dressed).norm() <= 1e-12);

  // the first-order coefficient genuinely moves the state mid-ramp
  CHECK(op_norm(b.a_ops[0]) > 1e-8);
}

TEST_CASE("a static unperturbed system needs no dressing") {
  ScenarioConfig cfg;
  cfg.length = 4;
  cfg.stagger = 1.0;
  cfg.gap = 1.0;
  cfg.sector = "half_filling";
  Scenario sc = build_scenario(cfg);  // no ramp, no perturbation

  NeassBundle b = build_neass(sc.neass_inputs(), sc.weight, 0.3, 1.0, 2);
  for (const Matrix& a : b.a_ops) CHECK(op_norm(a) <= 1e-12);
  Matrix d = b.dressing(0.2);
  CHECK(op_norm(d - Matrix::Identity(d.rows(), d.cols())) <= 1e-11);
}

TEST_CASE("the gap gate rejects near-critical chains") {
  ScenarioConfig cfg;
  cfg.length = 4;
  cfg.hopping = 0.3;
  cfg.stagger = 0.0;  // sector gap well below the band edge
  cfg.gap = 1.0;
  cfg.sector = "half_filling";
  Scenario sc = build_scenario(cfg);

  CHECK_THROWS_AS(build_neass(sc.neass_inputs(), sc.weight, 0.0, 1.0, 1),
                  std::runtime_error);

  NeassBundle b = build_neass(sc.neass_inputs(), sc.weight, 0.0, 1.0, 1, 1e-4,
                              /*require_gap=*/false);
  CHECK(!b.gap_ok);
  CHECK(b.gap < sc.weight.gap());
}

TEST_CASE("series orders validate their inputs") {
  ScenarioConfig cfg;
  cfg.length = 4;
  cfg.stagger = 1.0;
  cfg.sector = "half_filling";
  Scenario sc = build_scenario(cfg);
  CHECK_THROWS_AS(build_neass(sc.neass_inputs(), sc.weight, 0.0, 1.0, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_neass(sc.neass_inputs(), sc.weight, 0.0, 1.0, 9),
                  std::invalid_argument);
}
