#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "neasslab/model.hpp"

namespace neasslab {

// Configuration problems carry their own type so the CLI can map them to a
// dedicated exit code.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvliouConfig {
  double t = 0.0;              // evaluation time for H0
  int pairs = 20;              // random (A, B) probes for the identity residual
  int quadrature_ops = 2;      // operators cross-checked by nested quadrature
  double tol_identity = 1e-8;
  double tol_quadrature = 1e-6;
  double tol_derivative = 1e-4;
  double fd_step = 1e-4;
};

struct LrConeConfig {
  double time_max = 2.5;
  int time_points = 18;
  double threshold = 0.1;
  double zeta_rate = 1.0;  // a in the exponential zeta(r) = e^{-a r}
  int max_distance = 0;    // 0: every distance the box affords
};

struct AdiabaticConfig {
  std::vector<int> orders = {1, 2};
  std::vector<double> epsilons = {0.2, 0.1, 0.05};
  double theta = 1.0;
  double t0 = 0.0;
  double t1 = 0.4;
  int steps_per_unit = 200;
  double fd_step = 1e-4;
  double slope_margin = 0.5;       // require slope(n) >= n - 1 - margin
  double stationarity_tol = 1e-10;  // dressing at t0 must be invisible to this level
};

struct BulkBoundaryConfig {
  int order = 2;
  double epsilon = 0.1;
  double theta = 1.0;
  double t0 = 0.0;
  double t1 = 0.4;
  int steps_per_unit = 150;
  double ratio_min = 10.0;
};

struct TdlConfig {
  std::vector<int> radii = {4, 6, 8, 10};     // interaction-level families
  std::vector<int> dyn_radii = {2, 3, 4, 5};  // Fock-space dynamical family
  double gamma = 0.8;
  double lambda = 1.0;
  std::vector<int> windows = {1, 2, 3};
  double t = 0.3;
  double eta = 1.0;
  double dynamic_ratio_min = 100.0;
  int steps_per_unit = 200;
};

struct RunConfig {
  ScenarioConfig scenario;
  std::string experiment_kind;  // empty when no experiment block is present
  InvliouConfig invliou;
  LrConeConfig lr;
  AdiabaticConfig adiabatic;
  BulkBoundaryConfig bulk_boundary;
  TdlConfig tdl;
  std::string canonical;  // sorted-key serialization for fingerprinting
};

// Parse / load a run configuration.  Unknown keys anywhere in the document
// are ConfigErrors, as are type mismatches and structural problems.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace neasslab
