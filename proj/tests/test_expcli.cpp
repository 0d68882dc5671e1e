#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qpair/config.hpp"
#include "qpair/errors.hpp"
#include "qpair/micro.hpp"
#include "qpair/observables.hpp"
#include "qpair/rng.hpp"
#include "qpair/scenarios.hpp"
#include "qpair/trajectory.hpp"

using namespace qpair;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "qpairsim-tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(QPAIRSIM_BINARY) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::vector<std::vector<double>> csv_rows(const std::string& path, int fields) {
  std::istringstream in(read_file(path));
  std::string line;
  std::vector<std::vector<double>> rows;
  bool past_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!past_header) {
      past_header = true;
      continue;
    }
    std::vector<double> row;
    std::istringstream fields_in(line);
    std::string field;
    while (std::getline(fields_in, field, ',')) row.push_back(std::stod(field));
    REQUIRE(static_cast<int>(row.size()) == fields);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("parse_config_text fills scenario defaults") {
  const ScenarioConfig c =
      parse_config_text(R"({"scenario": "isolated", "omega": 0.5})");
  CHECK(c.scenario == Scenario::Isolated);
  CHECK(c.omega == 0.5);
  CHECK(c.seed == 1);
  CHECK_FALSE(c.self_check);
  CHECK(c.out_dir == ".");
  CHECK(c.output.csv == "isolated.csv");
  CHECK(c.output.svg == "isolated.svg");
  CHECK_FALSE(c.grid.has_value());
  CHECK_FALSE(c.config_hash.empty());

  const ScenarioConfig t =
      parse_config_text(R"({"scenario": "threshold_scan", "omega": 2.0})");
  REQUIRE(t.scan.has_value());
  CHECK(t.scan->lambda_min == doctest::Approx(1.0));
  CHECK(t.scan->lambda_max == doctest::Approx(3.0));
  CHECK(t.scan->resolution == doctest::Approx(0.005));
}

TEST_CASE("parse_config_text rejects malformed documents") {
  CHECK_THROWS_AS(parse_config_text("not json"), config_error);
  CHECK_THROWS_AS(parse_config_text(R"({"omega": 1.0})"), config_error);
  CHECK_THROWS_AS(parse_config_text(R"({"scenario": "warp", "omega": 1.0})"),
                  config_error);
  CHECK_THROWS_AS(
      parse_config_text(R"({"scenario": "isolated", "omega": 1.0, "zeta": 2})"),
      config_error);
  CHECK_THROWS_AS(parse_config_text(R"({"scenario": "isolated", "omega": "fast"})"),
                  config_error);
  CHECK_THROWS_AS(parse_config_text(R"({"scenario": "isolated", "seed": -5})"),
                  config_error);
  // Keys from another scenario are rejected, not ignored.
  CHECK_THROWS_AS(
      parse_config_text(R"({"scenario": "isolated", "omega": 1.0, "lambda": 0.5})"),
      config_error);
  CHECK_THROWS_AS(parse_config_text(
                      R"({"scenario": "lindblad", "omega": 1.0, "lambda": 0.5,
                          "grid": {"t_max": 1.0, "points": 1}})"),
                  config_error);
  CHECK_THROWS_AS(parse_config_text(
                      R"({"scenario": "lindblad", "omega": 1.0, "lambda": 0.5,
                          "grid": {"t_max": 1.0, "t_min": 0.1}})"),
                  config_error);
  CHECK_THROWS_AS(parse_config_text(
                      R"({"scenario": "lindblad", "omega": 1.0, "lambda": 0.5,
                          "grid": {"t_max": 1.0, "spacing": "log"}})"),
                  config_error);
  CHECK_THROWS_AS(parse_config_text(R"({"scenario": "threshold_scan", "omega": 0.0})"),
                  config_error);
  // Sweep parameters are tied to their scenario.
  CHECK_THROWS_AS(parse_config_text(
                      R"({"scenario": "micro_gravitational", "omega": 1.0,
                          "sweep": {"parameter": "lambda", "values": [0.5]}})"),
                  config_error);
  CHECK_THROWS_AS(parse_config_text(
                      R"({"scenario": "lindblad", "omega": 1.0, "lambda": 0.5,
                          "sweep": {"parameter": "n_particles", "values": [4]}})"),
                  config_error);
  CHECK_THROWS_AS(parse_config_text(
                      R"({"scenario": "micro_gravitational", "omega": 1.0,
                          "sweep": {"parameter": "n_particles", "values": [2.5]}})"),
                  config_error);
  // Time-dependent scenario needs a genuinely time-dependent schedule.
  CHECK_THROWS_AS(parse_config_text(
                      R"({"scenario": "lindblad_tdep", "omega": 1.0,
                          "schedule": {"kind": "constant", "lambda": 0.5}})"),
                  config_error);
}

TEST_CASE("parse_config_text accepts schedules and output overrides") {
  const ScenarioConfig c = parse_config_text(
      R"({"scenario": "lindblad", "omega": 1.0,
          "schedule": {"kind": "tabulated",
                       "table": [[0.0, 0.0], [1.0, 0.5], [2.0, 0.25]]},
          "output": {"csv": "mine.csv", "svg": "mine.svg"}})");
  REQUIRE(c.schedule.has_value());
  CHECK(c.schedule->kind == LambdaSchedule::Kind::Tabulated);
  CHECK(c.schedule->rate(0.5) == doctest::Approx(0.25));
  CHECK(c.output.csv == "mine.csv");
  CHECK(c.output.svg == "mine.svg");
}

TEST_CASE("apply_overrides folds CLI flags and re-stamps the hash") {
  ScenarioConfig c = parse_config_text(R"({"scenario": "isolated", "omega": 1.0})");
  const std::string base_hash = c.config_hash;

  CliOverrides seed_only;
  seed_only.seed = 99;
  ScenarioConfig with_seed = c;
  apply_overrides(with_seed, seed_only);
  CHECK(with_seed.seed == 99);
  CHECK(with_seed.config_hash != base_hash);

  CliOverrides dir_only;
  dir_only.out_dir = "/tmp/elsewhere";
  ScenarioConfig with_dir = c;
  apply_overrides(with_dir, dir_only);
  CHECK(with_dir.out_dir == "/tmp/elsewhere");
  // Output location is not part of the physics; the hash stays put.
  CHECK(with_dir.config_hash == base_hash);

  CliOverrides checks;
  checks.tolerance = 1e-8;
  checks.self_check = true;
  ScenarioConfig with_checks = c;
  apply_overrides(with_checks, checks);
  CHECK(with_checks.positivity_tol == 1e-8);
  CHECK(with_checks.self_check);
}

TEST_CASE("format_double emits shortest round-trip forms") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5e-10) == "-2.5e-10");
  for (double x : {1.0 / 3.0, std::numbers::pi, 6.02e23, 1e-300}) {
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("fnv1a_hex reference vectors") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("qpairsim") != fnv1a_hex("qpairsiN"));
}

TEST_CASE("trajectory CSV round trip is exact") {
  Trajectory traj;
  traj.header.tool_version = "0.1.0";
  traj.header.scenario = "isolated";
  traj.header.engine = "micro-exact";
  traj.header.config_hash = "0123456789abcdef";
  traj.header.seed = 42;
  traj.header.self_check = true;
  for (double t : {0.0, 1.0 / 3.0, 2.5e-10, 1.7}) {
    TrajectoryRecord r;
    r.t = t;
    r.concurrence = std::sin(t);
    r.purity = 1.0 - t * t * 1e-4;
    r.fidelity_ref = 1.0 / (1.0 + t);
    r.gamma_a_abs = std::exp(-t);
    r.gamma_a_arg = -t / 3.0;
    r.gamma_b_abs = std::exp(-2.0 * t);
    r.gamma_b_arg = t / 7.0;
    r.lambda_plus_abs = std::exp(-3.0 * t);
    r.lambda_minus_abs = 1.0;
    traj.records.push_back(r);
  }
  const std::string text = trajectory_csv(traj);
  const Trajectory back = parse_trajectory_csv(text);
  CHECK(back.header.scenario == "isolated");
  CHECK(back.header.engine == "micro-exact");
  CHECK(back.header.config_hash == "0123456789abcdef");
  CHECK(back.header.seed == 42);
  CHECK(back.header.self_check);
  REQUIRE(back.records.size() == traj.records.size());
  for (std::size_t i = 0; i < traj.records.size(); ++i) {
    CHECK(back.records[i].t == traj.records[i].t);
    CHECK(back.records[i].concurrence == traj.records[i].concurrence);
    CHECK(back.records[i].purity == traj.records[i].purity);
    CHECK(back.records[i].fidelity_ref == traj.records[i].fidelity_ref);
    CHECK(back.records[i].gamma_a_abs == traj.records[i].gamma_a_abs);
    CHECK(back.records[i].gamma_a_arg == traj.records[i].gamma_a_arg);
    CHECK(back.records[i].gamma_b_abs == traj.records[i].gamma_b_abs);
    CHECK(back.records[i].gamma_b_arg == traj.records[i].gamma_b_arg);
    CHECK(back.records[i].lambda_plus_abs == traj.records[i].lambda_plus_abs);
    CHECK(back.records[i].lambda_minus_abs == traj.records[i].lambda_minus_abs);
  }

  CHECK_THROWS_AS(parse_trajectory_csv("t,purity\n0,1\n"), config_error);
  CHECK_THROWS_AS(parse_trajectory_csv(text.substr(0, text.size() - 4)), config_error);
  std::string corrupted = text;
  corrupted.replace(corrupted.rfind("1,"), 2, "x,");
  CHECK_THROWS_AS(parse_trajectory_csv(corrupted), config_error);
}

TEST_CASE("trajectory SVG output") {
  Trajectory traj;
  traj.header.tool_version = "0.1.0";
  traj.header.scenario = "isolated";
  traj.header.engine = "micro-exact";
  traj.header.config_hash = "feed";
  for (int i = 0; i <= 50; ++i) {
    TrajectoryRecord r;
    r.t = 0.02 * i + 1e-4;
    r.concurrence = std::abs(std::sin(r.t));
    r.purity = std::exp(-r.t * r.t * 0.3);
    traj.records.push_back(r);
  }
  PlotOptions linear;
  const std::string svg = trajectory_svg(traj, linear);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg == trajectory_svg(traj, linear));  // deterministic

  PlotOptions loglog;
  loglog.log_log = true;
  const std::string svg2 = trajectory_svg(traj, loglog);
  CHECK(svg2.rfind("<svg", 0) == 0);
  CHECK(svg2.find("1e-") != std::string::npos);  // decade tick labels

  Trajectory flat = traj;
  for (auto& r : flat.records) r.purity = 1.0;
  const std::string svg3 = trajectory_svg(flat, loglog);
  CHECK(svg3.find("no positive purity deficit") != std::string::npos);
}

TEST_CASE("run_scenario isolated matches the analytic law") {
  const auto dir = fresh_dir("iso");
  ScenarioConfig c = parse_config_text(
      R"({"scenario": "isolated", "omega": 0.5,
          "grid": {"t_max": 3.14159, "points": 40}})");
  c.out_dir = dir.string();
  const RunResult result = run_scenario(c);
  CHECK(result.trajectory.header.engine == "micro-exact");
  CHECK(result.files_written.size() == 2);
  for (const std::string& f : result.files_written)
    CHECK(std::filesystem::exists(f));
  for (const TrajectoryRecord& r : result.trajectory.records) {
    CHECK(std::abs(r.concurrence - std::abs(std::sin(r.t))) < 1e-10);
    CHECK(std::abs(r.purity - 1.0) < 1e-12);
    CHECK(std::abs(r.fidelity_ref - 1.0) < 1e-9);
  }
}

TEST_CASE("run_scenario above-threshold lindblad never entangles") {
  const auto dir = fresh_dir("above");
  ScenarioConfig c = parse_config_text(
      R"({"scenario": "lindblad", "omega": 1.0, "lambda": 2.0,
          "grid": {"t_max": 1.5, "points": 60}})");
  c.out_dir = dir.string();
  const RunResult result = run_scenario(c);
  CHECK(result.trajectory.header.engine == "gksl-exponential");
  for (const TrajectoryRecord& r : result.trajectory.records)
    CHECK(r.concurrence <= 1e-10);
}

TEST_CASE("run_scenario is byte-deterministic") {
  const auto dir1 = fresh_dir("det1");
  const auto dir2 = fresh_dir("det2");
  ScenarioConfig c = parse_config_text(
      R"({"scenario": "micro_random", "omega": 1.0, "seed": 42,
          "environment": {"n_particles": 5},
          "grid": {"t_max": 2.0, "points": 50}})");
  ScenarioConfig c1 = c, c2 = c;
  c1.out_dir = dir1.string();
  c2.out_dir = dir2.string();
  run_scenario(c1);
  run_scenario(c2);
  CHECK(read_file((dir1 / "micro_random.csv").string())
        == read_file((dir2 / "micro_random.csv").string()));
  CHECK(read_file((dir1 / "micro_random.svg").string())
        == read_file((dir2 / "micro_random.svg").string()));
}

TEST_CASE("run_scenario gravitational honors the pair coupling") {
  const auto dir = fresh_dir("grav");
  // Equal masses freeze the environment; the trajectory must then be the
  // isolated one at the configured omega.
  ScenarioConfig c = parse_config_text(
      R"({"scenario": "micro_gravitational", "omega": 0.6, "seed": 3,
          "gravity": {"m1": 1.3, "m2": 1.3,
                      "distances_a": [1.0, 2.0], "distances_b": [1.5, 0.8]},
          "grid": {"t_max": 2.0, "points": 30}})");
  c.out_dir = dir.string();
  c.self_check = true;
  const RunResult result = run_scenario(c);
  CHECK(result.trajectory.header.engine == "micro-exact");
  for (const TrajectoryRecord& r : result.trajectory.records) {
    CHECK(std::abs(r.concurrence - std::abs(std::sin(2.0 * 0.6 * r.t))) < 1e-10);
    CHECK(std::abs(r.purity - 1.0) < 1e-12);
  }
}

TEST_CASE("run_scenario refuses sweep configs") {
  ScenarioConfig c = parse_config_text(
      R"({"scenario": "lindblad", "omega": 1.0, "lambda": 0.5,
          "sweep": {"parameter": "lambda", "values": [0.5, 1.5]}})");
  CHECK_THROWS_AS(run_scenario(c), config_error);
}

TEST_CASE("run_compare reproduces the decay-law split") {
  const auto dir = fresh_dir("compare");
  ScenarioConfig c = parse_config_text(
      R"({"scenario": "compare", "omega": 1.0, "seed": 7,
          "compare": {"sigma": 1.0, "n_particles": 6}})");
  c.out_dir = dir.string();
  const CompareResult result = run_compare(c);
  CHECK(std::abs(result.micro_exponent - 2.0) < 0.05);
  CHECK(std::abs(result.tdep_exponent - 2.0) < 0.05);
  CHECK(std::abs(result.lindblad_exponent - 1.0) < 0.1);
  CHECK(std::abs(result.micro_slope - 2.0) < 0.05);
  CHECK(std::filesystem::exists(result.csv_path));
  CHECK(std::filesystem::exists(result.report_path));
  const std::string report = read_file(result.report_path);
  CHECK(report.find("micro") != std::string::npos);
  CHECK(report.find("exponent") != std::string::npos);
  // Nine numeric columns per row.
  csv_rows(result.csv_path, 9);
}

TEST_CASE("run_sweep over lambda brackets the threshold") {
  const auto dir = fresh_dir("sweep-lambda");
  ScenarioConfig c = parse_config_text(
      R"({"scenario": "lindblad", "omega": 1.0, "lambda": 0.5,
          "sweep": {"parameter": "lambda",
                    "values": [0.25, 0.5, 0.75, 0.95, 1.05, 1.25, 1.5, 2.0]}})");
  c.out_dir = dir.string();
  const SweepResult result = run_sweep(c);
  CHECK(result.rows_written == 8);
  CHECK(result.rows_reused == 0);
  const auto rows = csv_rows(result.csv_path, 5);
  REQUIRE(rows.size() == 8);
  int flips = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i][4] != rows[i - 1][4]) {
      ++flips;
      CHECK(rows[i - 1][0] == 0.95);
      CHECK(rows[i][0] == 1.05);
    }
  CHECK(flips == 1);
  for (const auto& row : rows) {
    const double lambda = row[0];
    CHECK(std::abs(row[2] - lindblad_concurrence_rate(1.0, lambda)) < 1e-12);
    if (lambda < 1.0) CHECK(std::abs(row[1] - row[2]) <= 0.01 * row[2]);
    if (lambda > 1.0) CHECK(row[1] == 0.0);
  }
}

TEST_CASE("run_sweep resumes from matching rows") {
  const auto dir = fresh_dir("sweep-resume");
  const std::string base =
      R"({"scenario": "lindblad", "omega": 1.0, "lambda": 0.5,
          "sweep": {"parameter": "lambda", "values": [VALUES], "resume": true}})";
  auto with_values = [&](const std::string& values) {
    std::string text = base;
    text.replace(text.find("VALUES"), 6, values);
    ScenarioConfig c = parse_config_text(text);
    c.out_dir = dir.string();
    return c;
  };

  const SweepResult first = run_sweep(with_values("0.25, 0.75, 1.25"));
  CHECK(first.rows_written == 3);
  CHECK(first.rows_reused == 0);

  const SweepResult again = run_sweep(with_values("0.25, 0.75, 1.25"));
  CHECK(again.rows_written == 0);
  CHECK(again.rows_reused == 3);

  const SweepResult extended = run_sweep(with_values("0.25, 0.5, 0.75, 1.25"));
  CHECK(extended.rows_written == 1);
  CHECK(extended.rows_reused == 3);
  CHECK(csv_rows(extended.csv_path, 5).size() == 4);

  // A changed sweep key (different omega) invalidates the cache.
  ScenarioConfig other = with_values("0.25, 0.75, 1.25");
  other.omega = 1.5;
  const SweepResult invalidated = run_sweep(other);
  CHECK(invalidated.rows_written == 3);
  CHECK(invalidated.rows_reused == 0);
}

TEST_CASE("run_sweep with no values writes only the header") {
  const auto dir = fresh_dir("sweep-empty");
  ScenarioConfig c = parse_config_text(
      R"({"scenario": "lindblad", "omega": 1.0, "lambda": 0.5,
          "sweep": {"parameter": "lambda", "values": []}})");
  c.out_dir = dir.string();
  const SweepResult result = run_sweep(c);
  CHECK(result.rows_written == 0);
  CHECK(csv_rows(result.csv_path, 5).empty());
  const std::string text = read_file(result.csv_path);
  CHECK(text.find("lambda,slope_estimate") != std::string::npos);
}

TEST_CASE("gravitational sweep rows follow the closed variance formula") {
  const auto dir = fresh_dir("sweep-grav");
  ScenarioConfig c = parse_config_text(
      R"({"scenario": "micro_gravitational", "omega": 1.0, "seed": 11,
          "gravity": {"g_constant": 0.9, "m1": 2.0, "m2": 1.0,
                      "distance_min": 0.5, "distance_max": 3.0},
          "sweep": {"parameter": "n_particles", "values": [2, 4, 6, 8]}})");
  c.out_dir = dir.string();
  const SweepResult result = run_sweep(c);
  const auto rows = csv_rows(result.csv_path, 5);
  REQUIRE(rows.size() == 4);
  const std::vector<int> ns = {2, 4, 6, 8};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int n = ns[i];
    CHECK(rows[i][0] == n);
    // Replay the row's geometry draw: dA for all particles, then dB.
    Rng rng(derive_seed(11, i));
    double sum_a = 0.0, sum_b = 0.0;
    for (int k = 0; k < n; ++k) {
      const double d = rng.uniform(0.5, 3.0);
      sum_a += 1.0 / (d * d);
    }
    for (int k = 0; k < n; ++k) {
      const double d = rng.uniform(0.5, 3.0);
      sum_b += 1.0 / (d * d);
    }
    const double pre = 0.9 * 0.9 / 4.0;  // G^2/4 (m1 - m2)^4 with m1-m2 = 1
    CHECK(std::abs(rows[i][1] - pre * sum_a) < 1e-12);
    CHECK(std::abs(rows[i][2] - pre * sum_b) < 1e-12);
    CHECK(std::abs(rows[i][3] - 0.5 * (rows[i][1] + rows[i][2])) < 1e-12);
    // Measured early-time deficit coefficient approaches the prediction.
    CHECK(std::abs(rows[i][4] - rows[i][3]) < 0.01 * rows[i][3]);
  }
}

TEST_CASE("run_threshold_scan pins the critical coupling") {
  const auto dir = fresh_dir("scan");
  ScenarioConfig c = parse_config_text(
      R"({"scenario": "threshold_scan", "omega": 1.0,
          "scan": {"lambda_min": 0.5, "lambda_max": 1.5, "resolution": 0.002}})");
  c.out_dir = dir.string();
  const ScanRunResult result = run_threshold_scan(c);
  CHECK(std::abs(result.lambda_star - 1.0) < 0.01);
  CHECK(std::abs(result.analytic_root - 1.0) < 0.002 + 1e-12);
  CHECK(std::abs(result.lambda_star - result.analytic_root) <= 0.002 + 1e-12);
  for (const std::string& f : result.files_written)
    CHECK(std::filesystem::exists(f));
}

TEST_CASE("replot regenerates an SVG from a trajectory CSV") {
  const auto dir = fresh_dir("replot");
  ScenarioConfig c = parse_config_text(
      R"({"scenario": "isolated", "omega": 1.0, "grid": {"t_max": 2.0, "points": 30}})");
  c.out_dir = dir.string();
  const RunResult run = run_scenario(c);
  PlotOptions options;
  const std::string out =
      replot((dir / "isolated.csv").string(), dir.string(), options);
  CHECK(std::filesystem::exists(out));
  const std::string direct = read_file((dir / "isolated.svg").string());
  CHECK(read_file(out) == direct);

  options.log_log = true;
  const std::string out2 =
      replot((dir / "isolated.csv").string(), dir.string(), options);
  CHECK(out2 != out);
  CHECK(std::filesystem::exists(out2));
}

TEST_CASE("command line contract") {
  const auto dir = fresh_dir("cli");
  CHECK(run_cli("--version") == 0);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("simulate " + (dir / "missing.json").string()) == 2);

  write_file((dir / "bad.json").string(),
             R"({"scenario": "isolated", "omega": 1.0, "typo_key": 3})");
  CHECK(run_cli("simulate " + (dir / "bad.json").string()) == 2);

  write_file((dir / "iso.json").string(),
             R"({"scenario": "isolated", "omega": 0.5,
                 "grid": {"t_max": 3.0, "points": 40}})");
  CHECK(run_cli("simulate " + (dir / "iso.json").string() + " --out-dir "
                + dir.string())
        == 0);
  CHECK(std::filesystem::exists(dir / "isolated.csv"));
  CHECK(std::filesystem::exists(dir / "isolated.svg"));

  CHECK(run_cli("plot " + (dir / "isolated.csv").string() + " --out-dir "
                + dir.string())
        == 0);
  write_file((dir / "garbage.csv").string(), "this,is,not\na,trajectory,file\n");
  CHECK(run_cli("plot " + (dir / "garbage.csv").string() + " --out-dir "
                + dir.string())
        == 2);

  // Determinism across seeded CLI invocations.
  write_file((dir / "mr.json").string(),
             R"({"scenario": "micro_random", "omega": 1.0,
                 "environment": {"n_particles": 4},
                 "grid": {"t_max": 1.0, "points": 20}})");
  const auto d1 = fresh_dir("cli-run1");
  const auto d2 = fresh_dir("cli-run2");
  CHECK(run_cli("simulate " + (dir / "mr.json").string() + " --seed 9 --out-dir "
                + d1.string())
        == 0);
  CHECK(run_cli("simulate " + (dir / "mr.json").string() + " --seed 9 --out-dir "
                + d2.string())
        == 0);
  CHECK(read_file((d1 / "micro_random.csv").string())
        == read_file((d2 / "micro_random.csv").string()));
  CHECK(read_file((d1 / "micro_random.svg").string())
        == read_file((d2 / "micro_random.svg").string()));
}
