#pragma once

#include <Eigen/Dense>
#include <complex>

namespace neasslab {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Complex = std::complex<double>;

struct EighResult {
  RealVector values;  // ascending
  Matrix vectors;     // columns
};

// Full Hermitian eigendecomposition (LAPACK divide & conquer).
EighResult eigh(const Matrix& a);

// Operator norm (largest singular value).  Exact dense computation for any
// square matrix; Hermitian inputs take the cheaper symmetric path.
double op_norm(const Matrix& a);

// Operator norm by Lanczos iteration with full reorthogonalization and a
// deterministic start vector.  Much cheaper than op_norm for large matrices;
// converges to the stated tolerance (relative) or max_iter Krylov steps.
double op_norm_estimate(const Matrix& a, double tol = 1e-9, int max_iter = 120);

// op_norm below the dimension threshold, op_norm_estimate above it.
double op_norm_auto(const Matrix& a, int dense_threshold = 512);

// exp(i * scale * H) for Hermitian H via eigendecomposition.
Matrix herm_exp(const Matrix& h, double scale);
Matrix herm_exp(const EighResult& eg, double scale);

bool is_hermitian(const Matrix& a, double tol = 1e-10);

// BLAS worker threads (clamped to >= 1).  One thread keeps floating-point
// summation order, and therefore every CSV byte, reproducible.
void set_blas_threads(int n);

}  // namespace neasslab
