#include "neasslab/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace neasslab {

namespace {

double flat_bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double flat_bump_derivative(double t) {
  return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0;
}

}  // namespace

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double f = flat_bump(t);
  double g = flat_bump(1.0 - t);
  return f / (f + g);
}

double smooth_step_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  double f = flat_bump(t);
  double g = flat_bump(1.0 - t);
  double fp = flat_bump_derivative(t);
  double gp = flat_bump_derivative(1.0 - t);
  double denom = (f + g) * (f + g);
  return (fp * g + f * gp) / denom;
}

double Ramp::value(double t) const {
  if (kind == Kind::constant) return amplitude;
  return amplitude * smooth_step((t - t_on) / (t_off - t_on));
}

double Ramp::derivative(double t) const {
  if (kind == Kind::constant) return 0.0;
  return amplitude * smooth_step_derivative((t - t_on) / (t_off - t_on)) /
         (t_off - t_on);
}

Ramp Ramp::constant(double amplitude) {
  Ramp r;
  r.kind = Kind::constant;
  r.amplitude = amplitude;
  return r;
}

Ramp Ramp::smooth(double t_on, double t_off, double amplitude) {
  if (!(t_off > t_on)) throw std::invalid_argument("Ramp: need t_off > t_on");
  Ramp r;
  r.kind = Kind::smooth;
  r.t_on = t_on;
  r.t_off = t_off;
  r.amplitude = amplitude;
  return r;
}

bool HamiltonianPath::time_dependent() const {
  for (const auto& [ramp, mat] : ramped)
    if (ramp.kind != Ramp::Kind::constant && mat.size() > 0) return true;
  return false;
}

Matrix HamiltonianPath::at(double t) const {
  Matrix h = base;
  for (const auto& [ramp, mat] : ramped) h += ramp.value(t) * mat;
  return h;
}

Matrix HamiltonianPath::dot(double t) const {
  Matrix h = Matrix::Zero(base.rows(), base.cols());
  for (const auto& [ramp, mat] : ramped) {
    double d = ramp.derivative(t);
    if (d != 0.0) h += d * mat;
  }
  return h;
}

namespace {

int step_count(const PropagateOptions& opt, double t0, double t1, double eta) {
  if (opt.total_steps) {
    if (*opt.total_steps < 1) throw std::invalid_argument("propagate: total_steps < 1");
    return *opt.total_steps;
  }
  double span = std::abs(t1 - t0) / eta;  // rescaled time
  int n = static_cast<int>(std::ceil(opt.steps_per_unit * span));
  return std::max(1, n);
}

Matrix run_steps(const HamiltonianPath& h, double t0, double t1, double eta, int n) {
  const double dt = (t1 - t0) / n;
  Matrix u = Matrix::Identity(h.dim(), h.dim());
  for (int j = 0; j < n; ++j) {
    double tm = t0 + (j + 0.5) * dt;
    u = herm_exp(h.at(tm), -dt / eta) * u;
  }
  return u;
}

// One midpoint step on a state via an adaptive Lanczos subspace: psi <-
// exp(i * scale * H) psi without a full eigendecomposition.
Vector krylov_exp_step(const Matrix& hmat, const Vector& psi, double scale) {
  const Eigen::Index dim = psi.size();
  const double nrm = psi.norm();
  if (nrm == 0.0) return psi;
  const int kmax = static_cast<int>(std::min<Eigen::Index>(dim, 96));

  Matrix basis(dim, kmax);
  std::vector<double> alpha, beta;
  basis.col(0) = psi / nrm;
  Vector w;
  for (int k = 0; k < kmax; ++k) {
    w = hmat * basis.col(k);
    double a_k = basis.col(k).dot(w).real();
    alpha.push_back(a_k);
    w -= a_k * basis.col(k);
    if (k > 0) w -= beta.back() * basis.col(k - 1);
    w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).adjoint() * w);
    double b_k = w.norm();

    bool breakdown = b_k <= 1e-14;
    // Residual estimate: magnitude of the last Krylov coefficient of the
    // propagated vector; once it is negligible the subspace is converged.
    if (breakdown || k >= 7) {
      int m = k + 1;
      Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
      for (int j = 0; j < m; ++j) {
        tri(j, j) = alpha[j];
        if (j > 0) tri(j, j - 1) = tri(j - 1, j) = beta[j - 1];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
      Eigen::VectorXcd small = Eigen::VectorXcd::Zero(m);
      for (int j = 0; j < m; ++j) {
        Complex phase = std::exp(Complex(0.0, scale * es.eigenvalues()(j)));
        small += phase * es.eigenvectors().col(j).cast<Complex>() *
                 es.eigenvectors()(0, j);
      }
      double tail = std::abs(small(m - 1)) * (breakdown ? 0.0 : b_k * std::abs(scale));
      if (breakdown || tail <= 1e-13 || k == kmax - 1)
        return nrm * (basis.leftCols(m) * small);
    }
    beta.push_back(b_k);
    if (k + 1 < kmax) basis.col(k + 1) = w / b_k;
  }
  throw std::runtime_error("krylov_exp_step: failed to converge");
}

Vector run_steps_state(const HamiltonianPath& h, Vector psi, double t0, double t1,
                       double eta, int n) {
  const double dt = (t1 - t0) / n;
  for (int j = 0; j < n; ++j) {
    double tm = t0 + (j + 0.5) * dt;
    psi = krylov_exp_step(h.at(tm), psi, -dt / eta);
  }
  return psi;
}

}  // namespace

Propagation propagate(const HamiltonianPath& h, double t0, double t1, double eta,
                      const PropagateOptions& opt) {
  if (eta <= 0.0) throw std::invalid_argument("propagate: eta must be positive");
  if (h.dim() == 0) throw std::invalid_argument("propagate: empty Hamiltonian");
  Propagation out;
  out.t0 = t0;
  out.t1 = t1;
  out.eta = eta;
  if (!h.time_dependent() || t0 == t1) {
    // Midpoint stepping with a frozen generator telescopes to one exponential.
    out.u = herm_exp(h.at(0.5 * (t0 + t1)), -(t1 - t0) / eta);
    out.steps = 1;
    if (opt.verify_doubling) out.doubling_defect = 0.0;
    return out;
  }
  const int n = step_count(opt, t0, t1, eta);
  out.steps = n;
  out.u = run_steps(h, t0, t1, eta, n);
  if (opt.verify_doubling) {
    Matrix coarse = run_steps(h, t0, t1, eta, std::max(1, n / 2));
    out.doubling_defect = op_norm_auto(out.u - coarse);
  }
  return out;
}

StatePropagation propagate_state(const HamiltonianPath& h, const Vector& psi0,
                                 double t0, double t1, double eta,
                                 const PropagateOptions& opt) {
  if (eta <= 0.0) throw std::invalid_argument("propagate_state: eta must be positive");
  if (psi0.size() != h.dim())
    throw std::invalid_argument("propagate_state: state dimension mismatch");
  StatePropagation out;
  out.t0 = t0;
  out.t1 = t1;
  out.eta = eta;
  const int n = (!h.time_dependent() || t0 == t1) ? 1 : step_count(opt, t0, t1, eta);
  out.steps = n;
  out.psi = run_steps_state(h, psi0, t0, t1, eta, n);
  if (opt.verify_doubling) {
    Vector coarse = run_steps_state(h, psi0, t0, t1, eta, std::max(1, n / 2));
    out.doubling_defect = (out.psi - coarse).norm();
  }
  return out;
}

LrScanResult lr_commutator_scan(const Matrix& h, const Matrix& a,
                                const std::vector<Matrix>& probes,
                                const std::vector<int>& distances,
                                const std::vector<double>& times, double threshold) {
  if (probes.size() != distances.size())
    throw std::invalid_argument("lr_commutator_scan: probes/distances mismatch");
  LrScanResult res;
  res.times = times;
  res.distances = distances;
  res.threshold = threshold;
  res.norms.resize(static_cast<Eigen::Index>(times.size()),
                   static_cast<Eigen::Index>(probes.size()));

  const EighResult eg = eigh(h);
  const Matrix a_eig = eg.vectors.adjoint() * a * eg.vectors;
  std::vector<Matrix> probes_eig;
  probes_eig.reserve(probes.size());
  for (const Matrix& b : probes) probes_eig.push_back(eg.vectors.adjoint() * b * eg.vectors);

  const Eigen::Index dim = h.rows();
  Matrix tau(dim, dim);
  for (std::size_t it = 0; it < times.size(); ++it) {
    const double t = times[it];
    for (Eigen::Index c = 0; c < dim; ++c)
      for (Eigen::Index r = 0; r < dim; ++r)
        tau(r, c) = a_eig(r, c) * std::exp(Complex(0.0, t * (eg.values(r) - eg.values(c))));
    for (std::size_t ib = 0; ib < probes.size(); ++ib) {
      Matrix comm = tau * probes_eig[ib] - probes_eig[ib] * tau;
      res.norms(static_cast<Eigen::Index>(it), static_cast<Eigen::Index>(ib)) =
          op_norm_auto(comm);
    }
  }

  // First-crossing time per distance, then the least-squares slope of
  // distance against crossing time.
  std::vector<double> xs, ys;
  for (std::size_t ib = 0; ib < probes.size(); ++ib) {
    for (std::size_t it = 0; it < times.size(); ++it) {
      double v = res.norms(static_cast<Eigen::Index>(it), static_cast<Eigen::Index>(ib));
      if (v >= threshold) {
        double tcross = times[it];
        if (it > 0) {
          double v0 = res.norms(static_cast<Eigen::Index>(it - 1),
                                static_cast<Eigen::Index>(ib));
          double f = (threshold - v0) / std::max(v - v0, 1e-300);
          tcross = times[it - 1] + f * (times[it] - times[it - 1]);
        }
        xs.push_back(tcross);
        ys.push_back(static_cast<double>(distances[ib]));
        break;
      }
    }
  }
  res.crossings = static_cast<int>(xs.size());
  if (xs.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    if (std::abs(denom) > 1e-30) res.fitted_velocity = (n * sxy - sx * sy) / denom;
  }
  return res;
}

VolumeConvergence volume_convergence(const std::vector<VolumePoint>& family,
                                     const std::vector<Site>& support,
                                     const Matrix& a_local, double t, double eta,
                                     double gamma, const PropagateOptions& opt) {
  if (family.size() < 2)
    throw std::invalid_argument("volume_convergence: need at least two volumes");

  VolumeConvergence out;
  out.gamma = gamma;

  std::vector<FockBasis> bases;
  std::vector<Matrix> evolved;
  bases.reserve(family.size());
  evolved.reserve(family.size());
  for (const VolumePoint& pt : family) {
    const Lattice& lat = *pt.lattice;
    FockBasis basis = FockBasis::full(lat.n_modes());
    std::vector<int> modes;
    for (const Site& s : canonical_sites(lat, support))
      for (int sg = 0; sg < lat.spin(); ++sg) modes.push_back(lat.mode_index(s, sg));
    Matrix a = embed(basis, modes, a_local);
    HamiltonianPath path;
    path.base = pt.h;
    Propagation prop = propagate(path, 0.0, t, eta, opt);
    evolved.push_back(heisenberg(prop.u, a));
    bases.push_back(std::move(basis));
    out.radii.push_back(lat.radius());
  }

  for (std::size_t i = 0; i + 1 < family.size(); ++i) {
    const Lattice& small = *family[i].lattice;
    const Lattice& big = *family[i + 1].lattice;
    std::vector<int> modes;
    for (const Site& s : small.sites()) {
      if (!big.contains(s))
        throw std::invalid_argument("volume_convergence: boxes are not nested");
      for (int sg = 0; sg < big.spin(); ++sg) modes.push_back(big.mode_index(s, sg));
    }
    Matrix lifted = embed(bases[i + 1], modes, evolved[i]);
    out.diff_norms.push_back(op_norm_auto(evolved[i + 1] - lifted));
    int dist = small.boundary_distance(canonical_sites(small, support), small.radius());
    out.boundary_dists.push_back(static_cast<double>(dist));
    out.zeta_values.push_back(std::exp(-std::pow(static_cast<double>(dist), gamma)));
  }

  // Rate of log(diff) against dist^gamma over the resolvable pairs.
  {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < out.diff_norms.size(); ++i) {
      if (out.diff_norms[i] > 1e-15) {
        xs.push_back(std::pow(out.boundary_dists[i], gamma));
        ys.push_back(std::log(out.diff_norms[i]));
      }
    }
    if (xs.size() >= 2) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const double n = static_cast<double>(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
      }
      double denom = n * sxx - sx * sx;
      if (std::abs(denom) > 1e-30) out.fitted_rate = -(n * sxy - sx * sy) / denom;
    }
  }

  const std::size_t m = out.diff_norms.size();
  const double d_first = out.diff_norms.front();
  const double d_last = out.diff_norms.back();
  bool all_zero = true;
  for (double d : out.diff_norms) all_zero = all_zero && d <= 1e-12;
  if (all_zero) {
    out.superpolynomial = true;
  } else if (m >= 3 && d_first > 1e-15 && out.diff_norms[1] > 1e-15) {
    // Power law through the first two pairs, extrapolated to the last.
    double r0 = out.boundary_dists[0], r1 = out.boundary_dists[1];
    double rl = out.boundary_dists[m - 1];
    double slope = (std::log(out.diff_norms[1]) - std::log(d_first)) /
                   (std::log(r1) - std::log(r0));
    double predicted = d_first * std::pow(rl / r0, slope);
    out.superpolynomial = d_last <= 0.5 * predicted;
  } else {
    out.superpolynomial = d_last <= 1e-12;
  }
  return out;
}

}  // namespace neasslab
