#pragma once

#include <string>
#include <vector>

#include "mflab/analysis.hpp"
#include "mflab/config.hpp"

namespace mflab {

struct CheckResult {
  std::string claim;     // the quantitative statement being verified
  double measured = 0.0;
  double expected_lo = 0.0;
  double expected_hi = 0.0;
  bool pass = false;
};

struct ExperimentOutcome {
  bool ok = true;  // all checks passed
  std::vector<CheckResult> checks;
};

// Runs the configured experiment, writing summary.txt, report.json,
// CSV series, and snapshots under cfg.out_dir.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

// Canned initial data for the linearized decay experiments.
ScalarField make_linear_data(const HalfPlaneGrid& g, LinearDataKind kind);

}  // namespace mflab
