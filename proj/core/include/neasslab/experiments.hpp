#pragma once

#include <string>

#include "neasslab/config.hpp"
#include "neasslab/report.hpp"

namespace neasslab {

// Experiment runners.  Each one builds the scenario from the run
// configuration, writes its CSV artifacts and a report.json under out_dir,
// prints a short summary to stdout, and returns the process exit code:
// 0 pass, 1 threshold failure, 2 premise rejected (e.g. a gapless chain fed
// to the Liouvillian-inversion check).  Configuration and scenario problems
// throw (ConfigError / std::invalid_argument) before any artifact is
// written; the CLI maps those to exit code 2 as well.
//
// When `out` is non-null the full report is copied there so callers can
// inspect the metrics without re-reading report.json.

int run_model_validate(const RunConfig& rc, const std::string& out_dir,
                       RunReport* out = nullptr);
int run_invliou_check(const RunConfig& rc, const std::string& out_dir,
                      RunReport* out = nullptr);
int run_lr_cone(const RunConfig& rc, const std::string& out_dir,
                RunReport* out = nullptr);
int run_adiabatic_sweep(const RunConfig& rc, const std::string& out_dir,
                        RunReport* out = nullptr);
int run_bulk_boundary(const RunConfig& rc, const std::string& out_dir,
                      RunReport* out = nullptr);
int run_tdl_convergence(const RunConfig& rc, const std::string& out_dir,
                        RunReport* out = nullptr);

// Dispatch on rc.experiment_kind ("validate" runs model_validate).
int run_experiment(const RunConfig& rc, const std::string& out_dir,
                   RunReport* out = nullptr);

}  // namespace neasslab
