#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpair/qcore.hpp"

namespace qpair {

struct TrajectoryRecord {
  double t = 0.0;
  double concurrence = 0.0;
  double purity = 0.0;
  double fidelity_ref = 0.0;  // vs the decoupled (isolated) state at the same t
  double gamma_a_abs = 0.0, gamma_a_arg = 0.0;
  double gamma_b_abs = 0.0, gamma_b_arg = 0.0;
  double lambda_plus_abs = 0.0, lambda_minus_abs = 0.0;
};

struct ProvenanceHeader {
  std::string tool_version;
  std::string scenario;
  std::string engine;
  std::string config_hash;
  std::uint64_t seed = 0;
  bool self_check = false;
};

struct Trajectory {
  ProvenanceHeader header;
  std::vector<TrajectoryRecord> records;
};

struct PlotOptions {
  bool log_log = false;  // log-log purity-deficit view instead of linear series
  std::string title;
};

// Shortest round-trip decimal form of x (std::to_chars); the only float
// formatter used in any output file, so outputs are byte-deterministic.
std::string format_double(double x);

// Fixed-notation form with the given precision, for SVG coordinates.
std::string format_fixed(double x, int precision);

// FNV-1a 64 over a canonical text, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

std::string provenance_block(const ProvenanceHeader& header,
                             const std::string& columns);

// Off-diagonal trajectory columns extracted from the state itself (works for
// both engines): gamma_a = 4 rho(0,2) e^{-2 i omega t}, gamma_b likewise from
// rho(0,1), lambda_plus = 4 rho(0,3), lambda_minus = 4 rho(1,2).
TrajectoryRecord make_record(double t, double omega, const DensityMatrix& rho,
                             const DensityMatrix& reference);

std::string trajectory_csv(const Trajectory& trajectory);
Trajectory parse_trajectory_csv(const std::string& text);

std::string trajectory_svg(const Trajectory& trajectory, const PlotOptions& options);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace qpair
