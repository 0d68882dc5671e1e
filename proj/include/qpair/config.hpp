#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpair/lindblad.hpp"

namespace qpair {

enum class Scenario {
  Isolated,
  MicroRandom,
  MicroGravitational,
  Lindblad,
  LindbladTdep,
  Compare,
  ThresholdScan,
};

const char* scenario_name(Scenario s);

struct TimeGridConfig {
  double t_max = 0.0;
  int points = 200;
  enum class Spacing { Linear, Log } spacing = Spacing::Linear;
  double t_min = 0.0;  // log spacing only
};

struct EnvironmentConfig {
  int n_particles = 6;
};

struct GravityConfig {
  double G = 1.0;
  double m1 = 2.0, m2 = 1.0;
  std::vector<double> distances_a, distances_b;
  bool uniform_weights = true;
  double distance_min = 0.5, distance_max = 3.0;  // sweep-generated geometries
};

struct CompareConfig {
  double sigma = 1.0;
  int n_particles = 8;
  std::string lambda_rule = "sigma";                      // or "explicit"
  double lambda = 0.0;                                    // explicit rule
  std::string lambda_tilde_rule = "half_sigma_squared";   // or "explicit"
  double lambda_tilde = 0.0;                              // explicit rule
};

struct ScanConfig {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double resolution = 0.005;
};

struct SweepConfig {
  std::string parameter;  // "lambda" or "n_particles"
  std::vector<double> values;
  bool resume = false;
};

struct OutputConfig {
  std::string csv, svg, report;  // defaults derived from the scenario name
};

struct ScenarioConfig {
  Scenario scenario = Scenario::Isolated;
  double omega = 1.0;
  double lambda = 0.5;
  double lambda_tilde = 0.5;
  std::optional<LambdaSchedule> schedule;  // overrides lambda/lambda_tilde
  bool include_local_z = false;
  double cA = 0.0, cB = 0.0;
  std::uint64_t seed = 1;
  EnvironmentConfig environment;
  std::optional<GravityConfig> gravity;
  std::optional<TimeGridConfig> grid;
  std::optional<CompareConfig> compare;
  std::optional<ScanConfig> scan;
  std::optional<SweepConfig> sweep;
  OutputConfig output;
  double positivity_tol = 1e-9;
  bool self_check = false;
  std::string out_dir = ".";
  std::string config_hash;  // over the effective configuration
};

// Strict parser: unknown keys anywhere in the document are usage errors, as
// are keys that do not apply to the declared scenario.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<double> tolerance;
  bool self_check = false;
};

// Folds CLI flags into the parsed config and stamps the provenance hash of
// the resulting effective configuration.
void apply_overrides(ScenarioConfig& config, const CliOverrides& overrides);

}  // namespace qpair
