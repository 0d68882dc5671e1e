#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qpair/config.hpp"
#include "qpair/errors.hpp"
#include "qpair/scenarios.hpp"
#include "qpair/version.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIntegrity = 3;

struct GlobalFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<double> tolerance;
  bool self_check = false;
};

qpair::ScenarioConfig load(const std::string& config_path, const GlobalFlags& flags) {
  qpair::ScenarioConfig config = qpair::parse_config_file(config_path);
  qpair::CliOverrides overrides;
  overrides.seed = flags.seed;
  overrides.out_dir = flags.out_dir;
  overrides.tolerance = flags.tolerance;
  overrides.self_check = flags.self_check;
  qpair::apply_overrides(config, overrides);
  return config;
}

void print_files(const std::vector<std::string>& files) {
  for (const std::string& f : files) std::cout << "wrote " << f << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-qubit dephasing dynamics: exact microscopic vs GKSL"};
  app.set_version_flag("--version", std::string("qpairsim ") + qpair::kVersion);
  app.require_subcommand(1);

  GlobalFlags flags;
  std::uint64_t seed_value = 0;
  std::string out_dir_value;
  double tolerance_value = 0.0;
  auto* seed_opt = app.add_option("--seed", seed_value, "override the config seed");
  auto* out_opt =
      app.add_option("--out-dir", out_dir_value, "directory for output files");
  auto* tol_opt = app.add_option("--tolerance", tolerance_value,
                                 "positivity tolerance for state validation");
  app.add_flag("--self-check", flags.self_check,
               "cross-validate engines against independent routes");

  std::string config_path;
  std::string csv_path;
  bool log_log = false;

  auto* simulate =
      app.add_subcommand("simulate", "run one trajectory scenario from a config");
  simulate->add_option("config", config_path, "JSON config file")->required();

  auto* compare = app.add_subcommand(
      "compare", "side-by-side microscopic vs GKSL vs time-dependent GKSL");
  compare->add_option("config", config_path, "JSON config file")->required();

  auto* sweep = app.add_subcommand("sweep", "summary row per sweep value");
  sweep->add_option("config", config_path, "JSON config file")->required();

  auto* scan = app.add_subcommand("scan-threshold",
                                  "locate the entanglement-suppression threshold");
  scan->add_option("config", config_path, "JSON config file")->required();

  auto* plot = app.add_subcommand("plot", "re-plot an existing trajectory CSV");
  plot->add_option("trajectory", csv_path, "trajectory CSV file")->required();
  plot->add_flag("--log-log", log_log, "log-log purity-deficit view");

  // Global flags may appear before or after the subcommand name.
  for (auto* sub : {simulate, compare, sweep, scan, plot}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  if (seed_opt->count() > 0) flags.seed = seed_value;
  if (out_opt->count() > 0) flags.out_dir = out_dir_value;
  if (tol_opt->count() > 0) flags.tolerance = tolerance_value;

  try {
    if (simulate->parsed()) {
      const qpair::ScenarioConfig config = load(config_path, flags);
      const qpair::RunResult result = qpair::run_scenario(config);
      print_files(result.files_written);
    } else if (compare->parsed()) {
      const qpair::ScenarioConfig config = load(config_path, flags);
      const qpair::CompareResult result = qpair::run_compare(config);
      print_files(result.files_written);
      std::cout << "purity-deficit exponents: micro "
                << qpair::format_double(result.micro_exponent) << ", gksl "
                << qpair::format_double(result.lindblad_exponent) << ", tdep "
                << qpair::format_double(result.tdep_exponent) << "\n";
    } else if (sweep->parsed()) {
      const qpair::ScenarioConfig config = load(config_path, flags);
      const qpair::SweepResult result = qpair::run_sweep(config);
      std::cout << "wrote " << result.csv_path << " (" << result.rows_written
                << " computed, " << result.rows_reused << " reused)\n";
    } else if (scan->parsed()) {
      const qpair::ScenarioConfig config = load(config_path, flags);
      const qpair::ScanRunResult result = qpair::run_threshold_scan(config);
      print_files(result.files_written);
      std::cout << "lambda_star: " << qpair::format_double(result.lambda_star)
                << " (analytic " << qpair::format_double(result.analytic_root)
                << ")\n";
    } else if (plot->parsed()) {
      qpair::PlotOptions options;
      options.log_log = log_log;
      const std::string out = flags.out_dir ? *flags.out_dir : std::string(".");
      const std::string path = qpair::replot(csv_path, out, options);
      std::cout << "wrote " << path << "\n";
    }
  } catch (const qpair::integrity_error& e) {
    std::cerr << "integrity error: " << e.what() << "\n";
    return kExitIntegrity;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "integrity error: " << e.what() << "\n";
    return kExitIntegrity;
  }
  return 0;
}
