#include "neasslab/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

#include "neasslab/rng.hpp"

namespace neasslab {

EighResult eigh(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigh: matrix not square");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  EighResult r;
  r.values.resize(n);
  r.vectors = a;  // zheevd overwrites with eigenvectors
  if (n == 0) return r;
  lapack_int info = LAPACKE_zheevd(
      LAPACK_COL_MAJOR, 'V', 'L', n,
      reinterpret_cast<lapack_complex_double*>(r.vectors.data()), n,
      r.values.data());
  if (info != 0)
    throw std::runtime_error("zheevd failed with info=" + std::to_string(info));
  return r;
}

double op_norm(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  if (a.rows() == a.cols() && is_hermitian(a, 1e-12)) {
    EighResult eg = eigh(a);
    return std::max(std::abs(eg.values(0)), std::abs(eg.values(eg.values.size() - 1)));
  }
  // Largest singular value = sqrt(largest eigenvalue of A^dagger A).
  Matrix g = a.adjoint() * a;
  g = Complex(0.5, 0.0) * (g + Matrix(g.adjoint()));
  EighResult eg = eigh(g);
  double top = eg.values(eg.values.size() - 1);
  return top > 0 ? std::sqrt(top) : 0.0;
}

namespace {

// Lanczos on a Hermitian operator given as a matvec; returns max |eigenvalue|
// of the tridiagonal restriction once converged.
template <typename MatVec>
double lanczos_extremal(Eigen::Index n, const MatVec& apply, double tol, int max_iter) {
  if (n == 0) return 0.0;
  CounterRng rng(0x6c616e637a6f73ULL, 0);  // fixed stream: deterministic results
  Vector q(n);
  for (Eigen::Index i = 0; i < n; ++i)
    q(i) = Complex(rng.normal(2 * static_cast<std::uint64_t>(i)),
                   rng.normal(2 * static_cast<std::uint64_t>(i) + 1));
  double q0 = q.norm();
  if (q0 == 0.0) return 0.0;
  q /= q0;

  const int kmax = std::min<int>(max_iter, static_cast<int>(n));
  Matrix basis(n, kmax);
  std::vector<double> alpha, beta;
  double prev = 0.0;
  Vector w;
  for (int k = 0; k < kmax; ++k) {
    basis.col(k) = q;
    w = apply(q);
    double a_k = w.dot(q).real();  // Eigen's dot conjugates the left argument
    alpha.push_back(a_k);
    w -= a_k * q;
    if (k > 0) w -= beta.back() * basis.col(k - 1);
    // Full reorthogonalization keeps the Krylov basis clean at these sizes.
    w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).adjoint() * w);
    double b_k = w.norm();

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (int j = 0; j <= k; ++j) {
      tri(j, j) = alpha[j];
      if (j > 0) tri(j, j - 1) = tri(j - 1, j) = beta[j - 1];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri, Eigen::EigenvaluesOnly);
    double cur = std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(k)));
    if (b_k <= 1e-14 * std::max(1.0, cur)) return cur;  // invariant subspace
    if (k > 2 && std::abs(cur - prev) <= tol * std::max(cur, 1e-300)) return cur;
    prev = cur;
    beta.push_back(b_k);
    q = w / b_k;
  }
  return prev;
}

}  // namespace

double op_norm_estimate(const Matrix& a, double tol, int max_iter) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  if (a.rows() == a.cols() && is_hermitian(a, 1e-12)) {
    return lanczos_extremal(a.rows(), [&](const Vector& v) { return Vector(a * v); },
                            tol, max_iter);
  }
  double top = lanczos_extremal(
      a.cols(), [&](const Vector& v) { return Vector(a.adjoint() * (a * v)); }, tol,
      max_iter);
  return top > 0 ? std::sqrt(top) : 0.0;
}

double op_norm_auto(const Matrix& a, int dense_threshold) {
  if (a.rows() <= dense_threshold && a.cols() <= dense_threshold) return op_norm(a);
  return op_norm_estimate(a);
}

Matrix herm_exp(const EighResult& eg, double scale) {
  const Eigen::Index n = eg.values.size();
  Matrix phased = eg.vectors;
  for (Eigen::Index j = 0; j < n; ++j)
    phased.col(j) *= std::exp(Complex(0.0, scale * eg.values(j)));
  return phased * eg.vectors.adjoint();
}

Matrix herm_exp(const Matrix& h, double scale) { return herm_exp(eigh(h), scale); }

bool is_hermitian(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - Matrix(a.adjoint())).cwiseAbs().maxCoeff() <= tol;
}

extern "C" void openblas_set_num_threads(int);

void set_blas_threads(int n) { openblas_set_num_threads(n < 1 ? 1 : n); }

}  // namespace neasslab
