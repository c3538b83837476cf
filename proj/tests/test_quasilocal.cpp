#include <doctest.h>

#include <memory>
#include <vector>

#include "neasslab/fock.hpp"
#include "neasslab/interaction.hpp"
#include "neasslab/lattice.hpp"
#include "neasslab/linalg.hpp"
#include "neasslab/quasilocal.hpp"
#include "neasslab/rng.hpp"

using namespace neasslab;

namespace {

Matrix random_even(const FockBasis& basis, std::uint64_t stream) {
  CounterRng rng(4242, stream);
  const int dim = basis.dim();
  Matrix a = Matrix::Zero(dim, dim);
  std::uint64_t ctr = 0;
  Matrix par = parity_operator(basis);
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r)
      a(r, c) = Complex(rng.normal(ctr++), rng.normal(ctr++));
  a = 0.5 * (a + a.adjoint().eval());
  // project onto the even part of the grading
  a = 0.5 * (a + Matrix(par * a * par));
  return a;
}

}  // namespace

TEST_CASE("conditional expectation is a norm-one projection") {
  Lattice lat = Lattice::chain(5, Geometry::open_box, 1);
  FockBasis basis = FockBasis::full(lat.n_modes());
  Matrix a = random_even(basis, 1);
  std::vector<int> kept = {1, 2, 3};

  Matrix ea = conditional_expectation(basis, a, kept);
  Matrix eea = conditional_expectation(basis, ea, kept);
  CHECK(op_norm(eea - ea) <= 1e-12);                    // idempotent
  CHECK(op_norm(ea) <= op_norm(a) + 1e-12);             // contraction
  CHECK(is_hermitian(ea, 1e-12));
  CHECK(is_even(basis, ea));

  Matrix id = Matrix::Identity(basis.dim(), basis.dim());
  CHECK(op_norm(conditional_expectation(basis, id, kept) - id) <= 1e-13);

  // E is linear and compatible with nested windows: E_small E_big = E_small
  std::vector<int> small = {2};
  Matrix nested = conditional_expectation(basis, ea, small);
  CHECK(op_norm(nested - conditional_expectation(basis, a, small)) <= 1e-12);
}

TEST_CASE("operators already inside the window are fixed points") {
  Lattice lat = Lattice::chain(4, Geometry::open_box, 1);
  FockBasis basis = FockBasis::full(4);
  FockBasis sub = FockBasis::full(2);
  Matrix hop = creation(sub, 0) * annihilation(sub, 1);
  hop += hop.adjoint().eval();
  Matrix a = embed(basis, {1, 2}, hop);

  CHECK(op_norm(conditional_expectation(basis, a, {1, 2}) - a) <= 1e-12);
  CHECK(op_norm(conditional_expectation(basis, a, {0, 1, 2, 3}) - a) <= 1e-13);
}

TEST_CASE("complement factors are traced to their mean") {
  Lattice lat = Lattice::chain(4, Geometry::open_box, 1);
  FockBasis basis = FockBasis::full(4);
  Matrix a = number_operator(basis, 0) * number_operator(basis, 3);
  // tracing out mode 3 replaces n_3 by its normalized trace 1/2
  Matrix ea = conditional_expectation(basis, a, {0});
  CHECK(op_norm(ea - Matrix(0.5 * number_operator(basis, 0))) <= 1e-13);

  // hopping across the cut has zero conditional expectation
  Matrix hop = creation(basis, 1) * annihilation(basis, 2);
  hop += hop.adjoint().eval();
  CHECK(op_norm(conditional_expectation(basis, hop, {0, 1})) <= 1e-13);
}

TEST_CASE("window variant matches the explicit mode list") {
  Lattice lat = Lattice::chain(6, Geometry::open_box, 1);  // sites -3..2
  FockBasis basis = FockBasis::full(6);
  Matrix a = random_even(basis, 2);

  // window radius 1 keeps sites -1, 0, 1 -> ranks 2, 3, 4
  Matrix via_window = conditional_expectation_window(lat, basis, a, 1);
  Matrix via_modes = conditional_expectation(basis, a, {2, 3, 4});
  CHECK(op_norm(via_window - via_modes) <= 1e-13);
}

TEST_CASE("f-norm reduces to the operator norm for window-zero operators") {
  Lattice lat = Lattice::chain(5, Geometry::open_box, 1);
  FockBasis basis = FockBasis::full(5);
  Matrix a = number_operator(basis, 2);  // site 0 sits in every window
  DecayFunction f = DecayFunction::exponential(1.0);
  CHECK(f_norm(lat, basis, a, f) == doctest::Approx(op_norm(a)).epsilon(1e-12));

  // spreading the operator out makes the f-norm strictly larger
  Matrix far = number_operator(basis, 0) * number_operator(basis, 4);
  CHECK(f_norm(lat, basis, far, f) > op_norm(far) + 0.1);
}

TEST_CASE("localization profile of a strictly local operator") {
  Lattice lat = Lattice::chain(5, Geometry::open_box, 1);
  FockBasis basis = FockBasis::full(5);
  Matrix a = number_operator(basis, 2);
  auto prof = localization_profile(lat, basis, a);
  REQUIRE(prof.radii.size() == 3);  // cover radius of -2..2 is 2
  CHECK(prof.radii[0] == 0);
  for (double r : prof.residuals) CHECK(r <= 1e-13);

  // a string operator touching the edges keeps a nonzero residual until the
  // windows swallow the whole box
  Matrix corr = number_operator(basis, 0) * number_operator(basis, 4);
  auto prof2 = localization_profile(lat, basis, corr);
  CHECK(prof2.residuals[0] > 0.1);
  CHECK(prof2.residuals[1] > 0.01);
  CHECK(prof2.residuals[2] <= 1e-13);
  CHECK(prof2.residuals[0] >= prof2.residuals[1]);
}

TEST_CASE("cone decomposition telescopes exactly") {
  Lattice lat = Lattice::chain(6, Geometry::open_box, 1);
  FockBasis basis = FockBasis::full(6);
  Matrix a = random_even(basis, 3);

  auto cone = cone_decomposition(lat, basis, a, {Site{0, 0}}, 0, 1);
  REQUIRE(cone.layers.size() >= 2);
  REQUIRE(cone.layers.size() == cone.radii.size());
  REQUIRE(cone.layers.size() == cone.layer_norms.size());

  Matrix total = Matrix::Zero(basis.dim(), basis.dim());
  for (const auto& layer : cone.layers) total += layer;
  CHECK(op_norm(total - a) <= 1e-12);

  for (std::size_t i = 0; i < cone.layers.size(); ++i)
    CHECK(cone.layer_norms[i] == doctest::Approx(op_norm(cone.layers[i])).epsilon(1e-10));
  for (std::size_t i = 1; i < cone.radii.size(); ++i)
    CHECK(cone.radii[i] == cone.radii[i - 1] + 1);

  // layer zero is the window expectation itself
  Matrix e0 = conditional_expectation_window(lat, basis, a, 0);
  CHECK(op_norm(cone.layers[0] - e0) <= 1e-13);
}
