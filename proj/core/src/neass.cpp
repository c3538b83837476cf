#include "neasslab/neass.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "neasslab/fock.hpp"
#include "neasslab/liouville.hpp"

namespace neasslab {

namespace {

void check_same_dim(const OperatorSeries& a, const OperatorSeries& b) {
  if (!a.c.empty() && !b.c.empty() && a.c[0].rows() != b.c[0].rows())
    throw std::invalid_argument("OperatorSeries: dimension mismatch");
}

// Truncated series commutator [p, x].
OperatorSeries series_commutator(const OperatorSeries& p, const OperatorSeries& x,
                                 int order) {
  check_same_dim(p, x);
  const int dim = static_cast<int>(p.c.empty() ? x.c[0].rows() : p.c[0].rows());
  OperatorSeries out = OperatorSeries::zero(order, dim);
  for (int i = 0; i <= p.max_order(); ++i) {
    if (p.c[i].size() == 0) continue;
    for (int j = 0; j <= x.max_order(); ++j) {
      if (i + j > order) break;
      if (x.c[j].size() == 0) continue;
      out.c[i + j] += p.c[i] * x.c[j] - x.c[j] * p.c[i];
    }
  }
  return out;
}

template <typename CoefFn>
OperatorSeries nested_conjugation(const OperatorSeries& p, const OperatorSeries& x,
                                  int order, const CoefFn& coef) {
  if (!p.c.empty() && p.c[0].size() != 0 && p.c[0].cwiseAbs().maxCoeff() > 0)
    throw std::invalid_argument("conjugation_series: P must vanish at order 0");
  const int dim =
      static_cast<int>(p.c.empty() ? (x.c.empty() ? 0 : x.c[0].rows()) : p.c[0].rows());
  OperatorSeries out = OperatorSeries::zero(order, dim);
  OperatorSeries term = OperatorSeries::zero(order, dim);
  for (int j = 0; j <= std::min(order, x.max_order()); ++j)
    if (x.c[j].size() != 0) term.c[j] = x.c[j];
  for (int m = 0;; ++m) {
    const Complex cm = coef(m);
    for (int j = 0; j <= order; ++j)
      if (term.c[j].size() != 0) out.c[j] += cm * term.c[j];
    if (m == order) break;
    term = series_commutator(p, term, order);
    // P has no constant term, so ad_P^m starts at degree m; once every
    // coefficient is gone the series has terminated.
    bool alive = false;
    for (int j = 0; j <= order; ++j)
      if (term.c[j].size() != 0 && term.c[j].cwiseAbs().maxCoeff() > 0) alive = true;
    if (!alive) break;
  }
  return out;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

OperatorSeries OperatorSeries::zero(int order, int dim) {
  OperatorSeries s;
  s.c.assign(order + 1, Matrix::Zero(dim, dim));
  return s;
}

OperatorSeries conjugation_series(const OperatorSeries& p, const OperatorSeries& x,
                                  int order) {
  return nested_conjugation(p, x, order, [](int m) {
    Complex im = std::pow(Complex(0.0, -1.0), m);
    return im / factorial(m);
  });
}

OperatorSeries averaged_conjugation_series(const OperatorSeries& p,
                                           const OperatorSeries& x, int order) {
  return nested_conjugation(p, x, order, [](int m) {
    Complex im = std::pow(Complex(0.0, -1.0), m);
    return im / factorial(m + 1);
  });
}

namespace {

// Full generator series of the moving frame at one time:
//   G = e^{-iP}(H0 + eps V)e^{iP}
//     + theta * eps * [ sum_m (-i)^m/(m+1)! ad_P^m(Pdot) ]
//     + theta * eps * I(H0dot),
// where P = eps S carries the dressing and Pdot its time derivative.
OperatorSeries generator_series(const OperatorSeries& p, const OperatorSeries& pdot,
                                const Matrix& h0, const Matrix& v, double theta,
                                const Matrix& inv_h0dot, int order) {
  const int dim = static_cast<int>(h0.rows());
  OperatorSeries x = OperatorSeries::zero(std::min(order, 1), dim);
  x.c[0] = h0;
  if (order >= 1) x.c[1] = v;
  OperatorSeries g = conjugation_series(p, x, order);
  if (order >= 1) g.c[1] += theta * inv_h0dot;
  if (order >= 2) {
    OperatorSeries t = averaged_conjugation_series(p, pdot, order - 1);
    for (int j = 1; j <= order; ++j)
      if (t.c[j - 1].size() != 0) g.c[j] += theta * t.c[j - 1];
  }
  return g;
}

struct BuildContext {
  const NeassInputs* in = nullptr;
  const WeightFunction* w = nullptr;
  double theta = 0.0;
  double fd_step = 1e-4;
  double t_root = 0.0;
  // Memoized coefficient stacks keyed by (offset from t_root in units of
  // fd_step/2, order); the finite-difference lattice makes hits frequent.
  std::map<std::pair<std::int64_t, int>, std::vector<Matrix>> memo;

  std::vector<Matrix> build(double t, int order, NeassBundle* record);
};

std::vector<Matrix> BuildContext::build(double t, int order, NeassBundle* record) {
  const std::int64_t key_t = std::llround(2.0 * (t - t_root) / fd_step);
  const auto key = std::make_pair(key_t, order);
  if (record == nullptr) {
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }

  // Time derivative of the lower-order coefficients: central differences at
  // steps h and h/2 combined by one Richardson step.
  std::vector<Matrix> adot;
  if (order >= 2) {
    const double h = fd_step;
    std::vector<Matrix> ap = build(t + h, order - 1, nullptr);
    std::vector<Matrix> am = build(t - h, order - 1, nullptr);
    std::vector<Matrix> bp = build(t + h / 2, order - 1, nullptr);
    std::vector<Matrix> bm = build(t - h / 2, order - 1, nullptr);
    adot.resize(order - 1);
    for (int i = 0; i < order - 1; ++i) {
      Matrix d1 = (ap[i] - am[i]) / (2.0 * h);
      Matrix d2 = (bp[i] - bm[i]) / h;
      adot[i] = (4.0 * d2 - d1) / 3.0;
      // The quotient amplifies the roundoff-level asymmetry of the inputs by
      // 1/h; project back onto the Hermitian part.
      adot[i] = 0.5 * (adot[i] + adot[i].adjoint().eval());
    }
  }

  const Matrix h0 = in->h0(t);
  const Matrix v = in->v(t);
  const Matrix h0dot = in->h0_dot(t);
  const int dim = static_cast<int>(h0.rows());
  const EighResult eg = eigh(h0);
  const Matrix inv_h0dot = inverse_liouvillian(eg, h0dot, *w);

  if (record != nullptr) {
    record->gap = eg.values.size() > 1 ? eg.values(1) - eg.values(0) : 0.0;
    record->gap_ok = record->gap >= w->gap() && record->gap > 1e-9;
  }

  OperatorSeries p = OperatorSeries::zero(order, dim);
  OperatorSeries pdot = OperatorSeries::zero(order, dim);
  for (int i = 1; i < order; ++i)
    if (!adot.empty()) pdot.c[i] = adot[i - 1];

  std::vector<Matrix> a_ops(order);
  std::vector<Matrix> remainders(order);
  for (int j = 1; j <= order; ++j) {
    OperatorSeries g = generator_series(p, pdot, h0, v, theta, inv_h0dot, j);
    remainders[j - 1] = g.c[j];  // A_j not yet present in P
    a_ops[j - 1] = inverse_liouvillian(eg, remainders[j - 1], *w);
    p.c[j] = a_ops[j - 1];
  }

  if (record != nullptr) {
    // Consistency of the split G_j = i[H0, A_j] + remainder_j once all
    // coefficients are in place.
    record->split_residuals.resize(order);
    OperatorSeries g = generator_series(p, pdot, h0, v, theta, inv_h0dot, order);
    for (int j = 1; j <= order; ++j) {
      Matrix expect = Complex(0.0, 1.0) * liouvillian(h0, a_ops[j - 1]) + remainders[j - 1];
      record->split_residuals[j - 1] = op_norm_auto(g.c[j] - expect);
    }
  }

  memo.emplace(key, a_ops);
  return a_ops;
}

}  // namespace

Matrix NeassBundle::s_matrix(double eps) const {
  if (a_ops.empty()) throw std::runtime_error("NeassBundle: empty bundle");
  Matrix s = a_ops[0];
  double p = 1.0;
  for (std::size_t j = 1; j < a_ops.size(); ++j) {
    p *= eps;
    s += p * a_ops[j];
  }
  return s;
}

Matrix NeassBundle::dressing(double eps) const { return herm_exp(s_matrix(eps), eps); }

Vector NeassBundle::dress(const Vector& psi, double eps) const {
  return dressing(eps) * psi;
}

NeassBundle build_neass(const NeassInputs& in, const WeightFunction& w, double t,
                        double theta, int order, double fd_step, bool require_gap) {
  if (order < 1) throw std::invalid_argument("build_neass: order must be >= 1");
  if (order > 6) throw std::invalid_argument("build_neass: order capped at 6");
  if (fd_step <= 0.0) throw std::invalid_argument("build_neass: bad fd_step");
  if (!in.h0 || !in.h0_dot || !in.v)
    throw std::invalid_argument("build_neass: missing inputs");

  NeassBundle bundle;
  bundle.order = order;
  bundle.t = t;
  bundle.theta = theta;
  bundle.fd_step = fd_step;

  BuildContext ctx;
  ctx.in = &in;
  ctx.w = &w;
  ctx.theta = theta;
  ctx.fd_step = fd_step;
  ctx.t_root = t;
  bundle.a_ops = ctx.build(t, order, &bundle);

  if (require_gap && !bundle.gap_ok)
    throw std::runtime_error("build_neass: spectral gap below the weight band edge");
  for (const Matrix& a : bundle.a_ops)
    if (!is_hermitian(a, 1e-8))
      throw std::runtime_error("build_neass: non-Hermitian coefficient");
  return bundle;
}

}  // namespace neasslab
