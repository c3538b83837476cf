#include "neasslab/liouville.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "neasslab/fock.hpp"

namespace neasslab {

namespace {

constexpr double kEnergyBin = 1e-9;

template <typename Kernel>
Matrix spectral_apply(const EighResult& eg, const Matrix& a, const Kernel& kernel) {
  const Eigen::Index dim = eg.values.size();
  if (a.rows() != dim || a.cols() != dim)
    throw std::invalid_argument("spectral_apply: dimension mismatch");
  Matrix at = eg.vectors.adjoint() * a * eg.vectors;
  std::map<std::int64_t, Complex> cache;
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      const double diff = eg.values(r) - eg.values(c);
      const std::int64_t key = std::llround(diff / kEnergyBin);
      auto it = cache.find(key);
      if (it == cache.end())
        it = cache.emplace(key, kernel(kEnergyBin * static_cast<double>(key))).first;
      at(r, c) *= it->second;
    }
  }
  return eg.vectors * at * eg.vectors.adjoint();
}

}  // namespace

Matrix inverse_liouvillian(const EighResult& eg, const Matrix& a, const WeightFunction& w) {
  return spectral_apply(eg, a, [&](double e) { return w.inverse_kernel(e); });
}

Matrix inverse_liouvillian(const Matrix& h, const Matrix& a, const WeightFunction& w) {
  return inverse_liouvillian(eigh(h), a, w);
}

Matrix band_average(const EighResult& eg, const Matrix& a, const WeightFunction& w) {
  return spectral_apply(eg, a, [&](double e) { return Complex(w.band_kernel(e), 0.0); });
}

Matrix band_average(const Matrix& h, const Matrix& a, const WeightFunction& w) {
  return band_average(eigh(h), a, w);
}

Matrix inverse_liouvillian_quadrature(const Matrix& h, const Matrix& a,
                                      const WeightFunction& w,
                                      const QuadratureOptions& opt) {
  if (opt.step_scale <= 0.0 || opt.tail_mass <= 0.0)
    throw std::invalid_argument("inverse_liouvillian_quadrature: bad options");
  const EighResult eg = eigh(h);
  const Eigen::Index dim = eg.values.size();
  if (a.rows() != dim || a.cols() != dim)
    throw std::invalid_argument("inverse_liouvillian_quadrature: dimension mismatch");

  // Truncate the outer integral where the remaining quadrature mass of w is
  // negligible, and size the uniform step against the fastest oscillation.
  const double s_max = w.tail_cutoff(opt.tail_mass);
  const double spread = eg.values(dim - 1) - eg.values(0);
  const double step = opt.step_scale / std::max(spread, w.gap());
  std::int64_t n = static_cast<std::int64_t>(std::ceil(s_max / step));
  n = ((n + 3) / 4) * 4;  // inner pairs at even nodes, outer pairs over those
  const double hstep = s_max / static_cast<double>(n);

  Matrix at = eg.vectors.adjoint() * a * eg.vectors;

  using RealArray = Eigen::ArrayXXd;
  using ComplexArray = Eigen::ArrayXXcd;
  ComplexArray rot(dim, dim), z(dim, dim);
  RealArray delta(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c)
    for (Eigen::Index r = 0; r < dim; ++r)
      delta(r, c) = eg.values(r) - eg.values(c);
  rot = (Complex(0.0, hstep) * delta.cast<Complex>()).exp();
  z.setConstant(Complex(1.0, 0.0));

  RealArray sin_m2 = RealArray::Zero(dim, dim);  // sin at node i-2
  RealArray sin_m1 = RealArray::Zero(dim, dim);  // sin at node i-1
  RealArray cum = RealArray::Zero(dim, dim);     // int_0^{u_i} sin(u delta) du
  RealArray outer = RealArray::Zero(dim, dim);

  const std::int64_t a_last = n / 2;
  for (std::int64_t i = 0; i <= n; ++i) {
    if ((i & 1023) == 0)  // restart the rotation to cap phase drift
      z = (Complex(0.0, hstep * static_cast<double>(i)) * delta.cast<Complex>()).exp();
    RealArray sin_cur = z.imag();
    if (i >= 2 && i % 2 == 0)
      cum += (hstep / 3.0) * (sin_m2 + 4.0 * sin_m1 + sin_cur);
    if (i % 2 == 0) {
      const std::int64_t aidx = i / 2;
      double coef = (aidx == 0 || aidx == a_last) ? 1.0 : (aidx % 2 == 1 ? 4.0 : 2.0);
      outer += (coef * w.value(hstep * static_cast<double>(i))) * cum;
    }
    sin_m2.swap(sin_m1);
    sin_m1.swap(sin_cur);
    z *= rot;
  }
  outer *= 2.0 * hstep / 3.0;  // outer Simpson spacing is 2 * hstep

  // Element-wise kernel 2i * outer applied to A in the eigenbasis.
  ComplexArray kern = Complex(0.0, 2.0) * outer.cast<Complex>();
  Matrix out = (kern * at.array()).matrix();
  return eg.vectors * out * eg.vectors.adjoint();
}

double identity_residual(const Matrix& h, const Matrix& rho, const Matrix& a,
                         const std::vector<Matrix>& probes, const WeightFunction& w) {
  const Matrix inv = inverse_liouvillian(h, a, w);
  const Matrix lhs = liouvillian(h, inv) - Complex(0.0, 1.0) * a;
  double worst = 0.0;
  for (const Matrix& b : probes) {
    const Complex val = (rho * (lhs * b - b * lhs)).trace();
    worst = std::max(worst, std::abs(val));
  }
  return worst;
}

GsDerivativeCheck gs_derivative_check(const HamiltonianPath& h0, double t,
                                      const Matrix& a, const WeightFunction& w,
                                      double fd_step) {
  if (fd_step <= 0.0) throw std::invalid_argument("gs_derivative_check: bad step");
  auto expectation = [&](double s) {
    GroundState gs = ground_state(h0.at(s));
    if (!gs.unique)
      throw std::runtime_error("gs_derivative_check: degenerate ground state");
    return std::real(Complex(gs.psi.dot(a * gs.psi)));
  };
  auto central = [&](double step) {
    return (expectation(t + step) - expectation(t - step)) / (2.0 * step);
  };
  GsDerivativeCheck out;
  const double d1 = central(fd_step);
  const double d2 = central(fd_step / 2.0);
  out.fd = (4.0 * d2 - d1) / 3.0;

  const EighResult eg = eigh(h0.at(t));
  GroundState gs = ground_state(h0.at(t));
  if (!gs.unique)
    throw std::runtime_error("gs_derivative_check: degenerate ground state");
  const Matrix inv = inverse_liouvillian(eg, h0.dot(t), w);
  // -i tr(P0 [I(Hdot), A]) = 2 Im <0| I(Hdot) A |0>.
  const Complex x = gs.psi.dot(inv * (a * gs.psi));
  out.formula = 2.0 * std::imag(x);
  out.diff = std::abs(out.fd - out.formula);
  return out;
}

}  // namespace neasslab
