// Microbenchmarks for the hot kernels: weighted interaction norms,
// conditional expectations, midpoint propagation and Liouvillian inversion.
// Not registered with ctest; run the binary directly.

#include <benchmark/benchmark.h>

#include <memory>

#include "neasslab/dynamics.hpp"
#include "neasslab/fock.hpp"
#include "neasslab/interaction.hpp"
#include "neasslab/lattice.hpp"
#include "neasslab/linalg.hpp"
#include "neasslab/liouville.hpp"
#include "neasslab/model.hpp"
#include "neasslab/quasilocal.hpp"
#include "neasslab/rng.hpp"
#include "neasslab/weightfn.hpp"

namespace {

using namespace neasslab;

Matrix random_hermitian(int dim, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  Matrix a(dim, dim);
  std::uint64_t ctr = 0;
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) a(r, c) = Complex(rng.normal(ctr++), rng.normal(ctr++));
  return 0.5 * (a + a.adjoint().eval());
}

void bm_interaction_norm(benchmark::State& state) {
  auto lat = std::make_shared<Lattice>(
      Lattice::chain(static_cast<int>(state.range(0)), Geometry::open_box, 1));
  Interaction phi = hopping_chain(lat, 1.0);
  phi += density_density(lat, 0.4, 3);
  DecayFunction zeta = DecayFunction::exponential(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(interaction_norm(phi, zeta, 2));
}
BENCHMARK(bm_interaction_norm)->Arg(16)->Arg(64)->Arg(256);

void bm_conditional_expectation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  FockBasis basis = FockBasis::full(n);
  Matrix par = parity_operator(basis);
  Matrix a = random_hermitian(basis.dim(), 7);
  a = 0.5 * (a + Matrix(par * a * par));
  std::vector<int> kept;
  for (int m = 0; m < n / 2; ++m) kept.push_back(m);
  for (auto _ : state)
    benchmark::DoNotOptimize(conditional_expectation(basis, a, kept));
}
BENCHMARK(bm_conditional_expectation)->Arg(6)->Arg(8)->Arg(10);

void bm_propagate(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  HamiltonianPath path;
  path.base = random_hermitian(dim, 11);
  path.ramped.emplace_back(Ramp::smooth(0.0, 1.0, 0.7), random_hermitian(dim, 13));
  PropagateOptions opt;
  opt.total_steps = 32;
  for (auto _ : state)
    benchmark::DoNotOptimize(propagate(path, 0.0, 1.0, 0.5, opt).u);
}
BENCHMARK(bm_propagate)->Arg(16)->Arg(64)->Arg(128);

void bm_inverse_liouvillian(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  WeightFunction w = WeightFunction::build(1.0);
  Matrix h = 2.0 * random_hermitian(dim, 17);
  Matrix a = random_hermitian(dim, 19);
  EighResult eg = eigh(h);
  for (auto _ : state) benchmark::DoNotOptimize(inverse_liouvillian(eg, a, w));
}
BENCHMARK(bm_inverse_liouvillian)->Arg(16)->Arg(64)->Arg(128);

void bm_weight_build(benchmark::State& state) {
  for (auto _ : state) {
    WeightFunction w = WeightFunction::build(1.0);
    benchmark::DoNotOptimize(w.leakage());
  }
}
BENCHMARK(bm_weight_build);

}  // namespace

int main(int argc, char** argv) {
  neasslab::set_blas_threads(1);
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
