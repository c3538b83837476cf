#pragma once

#include <functional>
#include <vector>

#include "neasslab/linalg.hpp"
#include "neasslab/weightfn.hpp"

namespace neasslab {

// Polynomial in the expansion parameter with matrix coefficients: c[j]
// multiplies eps^j.  All arithmetic truncates at the requested order.
struct OperatorSeries {
  std::vector<Matrix> c;

  int max_order() const { return static_cast<int>(c.size()) - 1; }
  static OperatorSeries zero(int order, int dim);
};

// e^{-iP} X e^{iP} = sum_m (-i)^m / m! ad_P^m(X) truncated at `order`, for a
// perturbation series P with vanishing order-0 coefficient.
OperatorSeries conjugation_series(const OperatorSeries& p, const OperatorSeries& x,
                                  int order);

// int_0^1 e^{-i lambda P} X e^{i lambda P} d lambda
//   = sum_m (-i)^m / (m+1)! ad_P^m(X), truncated at `order`.
OperatorSeries averaged_conjugation_series(const OperatorSeries& p,
                                           const OperatorSeries& x, int order);

// Time-dependent inputs of the expansion at fixed theta = eta / eps:
// the reference Hamiltonian, its analytic time derivative, and the
// perturbation, each as callables of t.
struct NeassInputs {
  std::function<Matrix(double)> h0;
  std::function<Matrix(double)> h0_dot;
  std::function<Matrix(double)> v;
};

// Coefficient bundle {A_j} of the dressing generator at one time.  The
// dressed state is e^{i eps S_n} applied to the instantaneous ground state,
// with S_n = sum_j eps^{j-1} A_j.  The bundle depends on theta but not on
// eps, so one bundle serves a whole eps-sweep at fixed theta.
struct NeassBundle {
  int order = 0;
  double t = 0.0;
  double theta = 0.0;
  double fd_step = 1e-4;
  std::vector<Matrix> a_ops;            // A_1 .. A_order
  std::vector<double> split_residuals;  // per-order consistency check
  double gap = 0.0;                     // spectral gap of h0(t) on this basis
  bool gap_ok = true;                   // gap >= weight gap and unique ground state

  Matrix s_matrix(double eps) const;
  Matrix dressing(double eps) const;  // exp(i eps S_n)
  Vector dress(const Vector& psi, double eps) const;
};

// Build the bundle by the order-by-order inversion A_j = I(R_j with A_j
// absent); time derivatives of lower coefficients enter through Richardson-
// extrapolated central differences with step fd_step.  With require_gap the
// ground state of h0(t) must be unique with gap at least the weight's band
// edge; otherwise the construction proceeds and only records the gap.
NeassBundle build_neass(const NeassInputs& in, const WeightFunction& w, double t,
                        double theta, int order, double fd_step = 1e-4,
                        bool require_gap = true);

}  // namespace neasslab
