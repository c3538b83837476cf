#pragma once

#include <vector>

#include "neasslab/linalg.hpp"

namespace neasslab {

struct WeightOptions {
  int n_terms = 15;             // number of squared-sinc factors
  double s_max_over_gap = 400;  // quadrature window: s_max = s_max_over_gap / gap
  int grid_points = 1 << 16;    // quadrature subintervals on [0, s_max]
  int kernel_grid = 4096;       // tabulation subintervals for the transform on [0, gap]
  double leakage_span = 3.0;    // certify |transform| on (gap, (1+span) * gap]
};

// Even, real, L^1-normalized weight w(s) = c * prod_n sinc^2(a_n s) whose
// Fourier transform vanishes outside [-gap, gap]: the rates a_n are chosen
// with sum 2 a_n = gap.  All moments are finite, so the transform is smooth,
// and w decays faster than any polynomial's reciprocal integrand would need.
class WeightFunction {
 public:
  // A default-constructed instance is an empty placeholder; every usable
  // weight comes out of build().
  WeightFunction() = default;

  static WeightFunction build(double gap, const WeightOptions& opt = WeightOptions{});

  double gap() const { return gap_; }
  const WeightOptions& options() const { return opt_; }
  const std::vector<double>& rates() const { return rates_; }
  double normalization() const { return norm_c_; }

  // w(s) in closed form.
  double value(double s) const;

  // integral of w(s) e^{-i s E} ds, evaluated from the tabulated quadrature
  // (real and even in E).  Equals 1 at E = 0 by normalization.
  double transform(double e) const;

  // Band-limited smoothing kernel: transform inside (-gap, gap), identically
  // zero outside.  Acts diagonally in an eigenbasis as multiplication on
  // energy differences.
  double band_kernel(double e) const;

  // Kernel of the spectral-flow inverse: (transform(E) - 1) / (i E), with the
  // removable singularity at 0 filled by the moment series and the exact
  // value i/E beyond the band edge.  Pure imaginary, odd.
  Complex inverse_kernel(double e) const;

  // Certified bound on |transform| sampled beyond the band edge, together
  // with the frequency attaining it.
  double leakage() const { return leakage_; }
  double leakage_at() const { return leakage_at_; }

  // Quadrature moments of s^j w(s), j = 0..10 (odd entries vanish).  Entry 0
  // records the normalization accuracy.  High entries are tail-sensitive and
  // reported for diagnostics only; the kernel series uses j = 2 and 4.
  const std::vector<double>& moments() const { return moments_; }

  // Smallest s beyond which the remaining quadrature mass of |w| is at most
  // eps; integrals of w may be truncated there.
  double tail_cutoff(double eps) const;

 private:
  double interp_transform(double e) const;

  double gap_ = 0.0;
  WeightOptions opt_;
  std::vector<double> rates_;       // a_n
  double norm_c_ = 1.0;
  double step_s_ = 0.0;             // quadrature spacing
  std::vector<double> simpson_w_;   // Simpson-weighted w samples (the 2x even
                                    // extension is folded in)
  double step_e_ = 0.0;             // tabulation spacing on [0, gap]
  std::vector<double> table_;       // transform at j * step_e_
  std::vector<double> moments_;
  double leakage_ = 0.0;
  double leakage_at_ = 0.0;
};

}  // namespace neasslab
