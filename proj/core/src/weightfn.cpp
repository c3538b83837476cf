#include "neasslab/weightfn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace neasslab {

namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// Cosine sum against the Simpson-weighted samples at uniform spacing h,
// using a rotation recurrence with periodic exact restarts.
double cosine_sum(const std::vector<double>& wts, double h, double e) {
  const std::size_t n = wts.size();
  double acc = 0.0;
  const Complex rot = std::exp(Complex(0.0, -h * e));
  Complex z(1.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if ((i & 4095u) == 0) z = std::exp(Complex(0.0, -h * e * static_cast<double>(i)));
    acc += wts[i] * z.real();
    z *= rot;
  }
  return acc;
}

}  // namespace

WeightFunction WeightFunction::build(double gap, const WeightOptions& opt) {
  if (gap <= 0.0) throw std::invalid_argument("WeightFunction: gap must be positive");
  if (opt.n_terms < 1 || opt.grid_points < 16 || opt.grid_points % 2 != 0 ||
      opt.kernel_grid < 16 || opt.s_max_over_gap <= 0.0)
    throw std::invalid_argument("WeightFunction: bad options");

  WeightFunction w;
  w.gap_ = gap;
  w.opt_ = opt;

  // a_n proportional to 1 / (n log^2(n + 1)), scaled so sum 2 a_n = gap.
  std::vector<double> raw(opt.n_terms);
  double total = 0.0;
  for (int n = 1; n <= opt.n_terms; ++n) {
    double ln = std::log(static_cast<double>(n + 1));
    raw[n - 1] = 1.0 / (n * ln * ln);
    total += raw[n - 1];
  }
  w.rates_.resize(opt.n_terms);
  for (int n = 0; n < opt.n_terms; ++n) w.rates_[n] = gap * raw[n] / (2.0 * total);

  const double s_max = opt.s_max_over_gap / gap;
  const int ns = opt.grid_points;
  w.step_s_ = s_max / ns;
  w.norm_c_ = 1.0;

  std::vector<double> sample(ns + 1);
  for (int i = 0; i <= ns; ++i) sample[i] = w.value(i * w.step_s_);

  // Simpson weights on [0, s_max], doubled for the even extension to the
  // whole line.
  w.simpson_w_.resize(ns + 1);
  for (int i = 0; i <= ns; ++i) {
    double c = (i == 0 || i == ns) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    w.simpson_w_[i] = 2.0 * sample[i] * c * w.step_s_ / 3.0;
  }

  const double raw_mass = cosine_sum(w.simpson_w_, w.step_s_, 0.0);
  if (raw_mass <= 0.0) throw std::runtime_error("WeightFunction: quadrature collapsed");
  w.norm_c_ = 1.0 / raw_mass;
  for (double& x : w.simpson_w_) x *= w.norm_c_;

  // Moments of s^j w(s).
  w.moments_.assign(11, 0.0);
  for (int j = 0; j <= 10; ++j) {
    double m = 0.0;
    for (int i = 0; i <= ns; ++i)
      m += w.simpson_w_[i] * (j == 0 ? 1.0 : std::pow(i * w.step_s_, j));
    // Odd moments vanish by symmetry of the even extension.
    w.moments_[j] = (j % 2 == 1) ? 0.0 : m;
  }

  // Tabulate the transform on [0, gap].
  const int ke = opt.kernel_grid;
  w.step_e_ = gap / ke;
  w.table_.resize(ke + 1);
  for (int j = 0; j <= ke; ++j)
    w.table_[j] = cosine_sum(w.simpson_w_, w.step_s_, j * w.step_e_);

  // Leakage certificate beyond the band edge.
  const int n_leak = 1024;
  w.leakage_ = 0.0;
  w.leakage_at_ = gap;
  for (int t = 1; t <= n_leak; ++t) {
    double k = gap * (1.0 + opt.leakage_span * t / n_leak);
    double v = std::abs(cosine_sum(w.simpson_w_, w.step_s_, k));
    if (v > w.leakage_) {
      w.leakage_ = v;
      w.leakage_at_ = k;
    }
  }
  return w;
}

double WeightFunction::value(double s) const {
  double prod = norm_c_;
  for (double a : rates_) {
    double f = sinc(a * s);
    prod *= f * f;
  }
  return prod;
}

double WeightFunction::transform(double e) const {
  return cosine_sum(simpson_w_, step_s_, std::abs(e));
}

double WeightFunction::tail_cutoff(double eps) const {
  double tail = 0.0;
  for (std::size_t i = simpson_w_.size(); i-- > 0;) {
    tail += std::abs(simpson_w_[i]);
    if (tail > eps) return (i + 1) * step_s_;
  }
  return step_s_;
}

double WeightFunction::interp_transform(double e) const {
  // 4-point cubic Lagrange on the uniform table; e in [0, gap).
  const int m = static_cast<int>(table_.size());
  double x = e / step_e_;
  int j = static_cast<int>(std::floor(x));
  j = std::clamp(j, 1, m - 3);
  double t = x - j;
  double wm = -t * (t - 1.0) * (t - 2.0) / 6.0;
  double w0 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  double w1 = -(t + 1.0) * t * (t - 2.0) / 2.0;
  double w2 = (t + 1.0) * t * (t - 1.0) / 6.0;
  return wm * table_[j - 1] + w0 * table_[j] + w1 * table_[j + 1] + w2 * table_[j + 2];
}

double WeightFunction::band_kernel(double e) const {
  double ae = std::abs(e);
  if (ae >= gap_) return 0.0;
  return interp_transform(ae);
}

Complex WeightFunction::inverse_kernel(double e) const {
  double ae = std::abs(e);
  double sgn = e < 0 ? -1.0 : 1.0;
  if (ae >= gap_) return Complex(0.0, sgn / ae);
  if (ae < 1e-5 * gap_) {
    // (transform(E) - 1)/(iE) = i (m2 E / 2 - m4 E^3 / 24 + ...)
    double v = moments_[2] * e / 2.0 - moments_[4] * e * e * e / 24.0;
    return Complex(0.0, v);
  }
  return Complex(0.0, -sgn * (interp_transform(ae) - 1.0) / ae);
}

}  // namespace neasslab
