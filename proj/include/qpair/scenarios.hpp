#pragma once

#include <string>
#include <vector>

#include "qpair/config.hpp"
#include "qpair/trajectory.hpp"

namespace qpair {

struct RunResult {
  Trajectory trajectory;
  std::vector<std::string> files_written;
};

struct CompareResult {
  std::string csv_path, report_path;
  std::vector<std::string> files_written;
  double micro_exponent = 0.0, micro_prefactor = 0.0;
  double lindblad_exponent = 0.0, lindblad_prefactor = 0.0;
  double tdep_exponent = 0.0, tdep_prefactor = 0.0;
  double micro_slope = 0.0, lindblad_slope = 0.0, tdep_slope = 0.0;
};

struct SweepResult {
  std::string csv_path;
  int rows_written = 0;
  int rows_reused = 0;
};

struct ScanRunResult {
  double lambda_star = 0.0;
  double analytic_root = 0.0;
  std::vector<std::string> files_written;
};

// Trajectory scenarios: isolated, micro_random, micro_gravitational,
// lindblad, lindblad_tdep. Writes CSV and SVG under config.out_dir.
RunResult run_scenario(const ScenarioConfig& config);

// Side-by-side microscopic / GKSL / time-dependent-GKSL run with calibrated
// parameters, purity-law fits, concurrence slopes, and cross-engine fidelity.
CompareResult run_compare(const ScenarioConfig& config);

// Parameter sweeps (lambda on the dephasing model, n_particles on the
// gravitational model); deterministic row order, resumable.
SweepResult run_sweep(const ScenarioConfig& config);

ScanRunResult run_threshold_scan(const ScenarioConfig& config);

// Re-plot an existing trajectory CSV.
std::string replot(const std::string& csv_path, const std::string& out_dir,
                   const PlotOptions& options);

}  // namespace qpair
