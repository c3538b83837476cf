#pragma once

#include <vector>

#include "neasslab/dynamics.hpp"
#include "neasslab/linalg.hpp"
#include "neasslab/weightfn.hpp"

namespace neasslab {

inline Matrix liouvillian(const Matrix& h, const Matrix& a) { return h * a - a * h; }

// Spectral action of a kernel on energy differences: out_mn = k(E_m - E_n) *
// (V^dagger A V)_mn rotated back.  Energy differences are binned at 1e-9 so
// numerically degenerate pairs share one kernel value (and the kernel cache).

// Quasi-local inverse of the Liouvillian: kernel (transform(E) - 1)/(iE).
Matrix inverse_liouvillian(const EighResult& eg, const Matrix& a, const WeightFunction& w);
Matrix inverse_liouvillian(const Matrix& h, const Matrix& a, const WeightFunction& w);

// Band-limited smoothing of A: kernel transform(E) restricted to |E| < gap.
Matrix band_average(const EighResult& eg, const Matrix& a, const WeightFunction& w);
Matrix band_average(const Matrix& h, const Matrix& a, const WeightFunction& w);

struct QuadratureOptions {
  double step_scale = 0.02;  // node spacing = step_scale / max(spread, gap)
  double tail_mass = 1e-13;  // truncate s where the remaining weight mass drops below
};

// Literal nested quadrature of the integral representation
//   I(A) = int ds w(s) int_0^s du  e^{iuH} A e^{-iuH},
// reduced by evenness to a single-pass cumulative rule.  Independent of the
// kernel tables; intended as a cross-check at small dimensions.
Matrix inverse_liouvillian_quadrature(const Matrix& h, const Matrix& a,
                                      const WeightFunction& w,
                                      const QuadratureOptions& opt = QuadratureOptions{});

// max over probes B of |tr(rho [ [H, I(A)] - iA, B ])|.  For a unique ground
// state separated by at least the weight's gap this vanishes identically.
double identity_residual(const Matrix& h, const Matrix& rho, const Matrix& a,
                         const std::vector<Matrix>& probes, const WeightFunction& w);

struct GsDerivativeCheck {
  double fd = 0.0;       // Richardson-extrapolated central difference
  double formula = 0.0;  // -i tr(P0 [I(Hdot), A])
  double diff = 0.0;
};

// d/dt tr(P0(t) A) for the instantaneous ground state of h0, checked against
// the inverse-Liouvillian generator formula.
GsDerivativeCheck gs_derivative_check(const HamiltonianPath& h0, double t,
                                      const Matrix& a, const WeightFunction& w,
                                      double fd_step = 1e-4);

}  // namespace neasslab
