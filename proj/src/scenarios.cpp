#include "qpair/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include "qpair/errors.hpp"
#include "qpair/micro.hpp"
#include "qpair/observables.hpp"
#include "qpair/rng.hpp"
#include "qpair/version.hpp"

namespace qpair {

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::vector<double> build_times(const TimeGridConfig& grid) {
  std::vector<double> times(static_cast<std::size_t>(grid.points));
  const int n = grid.points;
  if (grid.spacing == TimeGridConfig::Spacing::Linear) {
    for (int i = 0; i < n; ++i)
      times[static_cast<std::size_t>(i)] = grid.t_max * i / (n - 1);
  } else {
    const double ratio = grid.t_max / grid.t_min;
    for (int i = 0; i < n; ++i)
      times[static_cast<std::size_t>(i)] =
          grid.t_min * std::pow(ratio, static_cast<double>(i) / (n - 1));
  }
  return times;
}

TimeGridConfig default_linear_grid(double scale) {
  TimeGridConfig grid;
  grid.t_max = 3.0 / (scale > 0.0 ? scale : 1.0);
  grid.points = 200;
  grid.spacing = TimeGridConfig::Spacing::Linear;
  return grid;
}

TimeGridConfig default_log_grid(double scale) {
  TimeGridConfig grid;
  const double s = scale > 0.0 ? scale : 1.0;
  grid.t_min = 1e-4 / s;
  grid.t_max = 1e-1 / s;
  grid.spacing = TimeGridConfig::Spacing::Log;
  grid.points = 76;  // 25 points per decade over three decades
  return grid;
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t max_samples) {
  std::vector<std::size_t> idx;
  if (n == 0) return idx;
  const std::size_t step = std::max<std::size_t>(1, n / max_samples);
  for (std::size_t i = 0; i < n; i += step) idx.push_back(i);
  if (idx.back() != n - 1) idx.push_back(n - 1);
  return idx;
}

void require_valid(const DensityMatrix& rho, double tol, double t) {
  const ValidationReport report = validate_density_matrix(rho, tol);
  if (!report.ok)
    throw integrity_error("state validation failed at t=" + format_double(t) + ": "
                          + report.message);
}

double schedule_scale(const LambdaSchedule& schedule) {
  switch (schedule.kind) {
    case LambdaSchedule::Kind::Constant:
      return schedule.lambda;
    case LambdaSchedule::Kind::Linear:
      return std::sqrt(schedule.lambda_tilde);
    case LambdaSchedule::Kind::Tabulated: {
      double peak = 0.0;
      for (const auto& [t, r] : schedule.table) peak = std::max(peak, r);
      return peak;
    }
  }
  return 0.0;
}

// Pure-dephasing state for an arbitrary schedule through the accumulated
// exposure int_0^t rate: exact for commuting coherent/dissipative parts.
DensityMatrix schedule_closed_form(double omega, const LambdaSchedule& schedule,
                                   double t) {
  const double exposure = schedule.integral(t);
  const double lambda_eff = t > 0.0 ? exposure / t : 0.0;
  return dephasing_closed_form(omega, lambda_eff, t);
}

struct EngineRun {
  std::string engine;
  std::vector<DensityMatrix> states;
};

EngineRun run_micro_states(const ScenarioConfig& config,
                           const std::vector<double>& times, MicroModel& model_out) {
  switch (config.scenario) {
    case Scenario::Isolated:
      model_out = isolated_model(config.omega);
      break;
    case Scenario::MicroRandom:
      model_out = random_model(config.omega, config.environment.n_particles,
                               config.seed);
      break;
    case Scenario::MicroGravitational: {
      if (!config.gravity || config.gravity->distances_a.empty())
        throw config_error("micro_gravitational requires gravity distance lists");
      GravitationalSpec spec;
      spec.G = config.gravity->G;
      spec.m1 = config.gravity->m1;
      spec.m2 = config.gravity->m2;
      spec.dA = config.gravity->distances_a;
      spec.dB = config.gravity->distances_b;
      GravitationalModel gm =
          gravitational_model(spec, config.gravity->uniform_weights, config.seed);
      gm.model.omega = config.omega;  // pair coupling is a separate dial
      if (config.self_check && config.gravity->uniform_weights) {
        const EnvMoments m = env_moments(gm.model);
        const double refA = std::max(std::abs(gm.predicted_sigmaA2), 1e-300);
        const double refB = std::max(std::abs(gm.predicted_sigmaB2), 1e-300);
        if (std::abs(m.sigmaA2 - gm.predicted_sigmaA2) / refA > 1e-10
            || std::abs(m.sigmaB2 - gm.predicted_sigmaB2) / refB > 1e-10)
          throw integrity_error(
              "gravitational variance prediction disagrees with environment moments");
      }
      model_out = gm.model;
      break;
    }
    default:
      throw config_error("not a microscopic scenario");
  }

  EngineRun run;
  run.engine = "micro-exact";
  run.states.reserve(times.size());
  for (double t : times) run.states.push_back(reduced_state(model_out, t));

  if (config.self_check) {
    for (std::size_t i : sample_indices(times.size(), 12)) {
      const DensityMatrix brute = brute_force_reduced_state(model_out, times[i]);
      if (max_abs(run.states[i] - brute) > 1e-12)
        throw integrity_error(
            "microscopic closed form disagrees with the brute-force oracle at t="
            + format_double(times[i]));
    }
  }
  return run;
}

EngineRun run_lindblad_states(const ScenarioConfig& config,
                              const std::vector<double>& times) {
  LambdaSchedule schedule;
  if (config.schedule) {
    schedule = *config.schedule;
  } else if (config.scenario == Scenario::Lindblad) {
    schedule = LambdaSchedule::constant(config.lambda);
  } else {
    schedule = LambdaSchedule::linear(config.lambda_tilde);
  }

  LindbladModel model = dephasing_model(config.omega, schedule);
  model.include_local_z = config.include_local_z;
  if (config.include_local_z) {
    model.cA = config.cA;
    model.cB = config.cB;
  }

  const bool constant = schedule.kind == LambdaSchedule::Kind::Constant;
  const EvolveMethod method = constant ? EvolveMethod::Exponential : EvolveMethod::Stepped;

  EngineRun run;
  run.engine = constant ? "gksl-exponential" : "gksl-rk4";
  const DensityMatrix rho0 = DensityMatrix::Constant(0.25);
  run.states = evolve_grid(model, rho0, times, method);

  if (config.self_check) {
    const double tol = constant ? 1e-9 : 1e-8;
    for (std::size_t i : sample_indices(times.size(), 16)) {
      const DensityMatrix closed =
          schedule_closed_form(config.omega, schedule, times[i]);
      if (!config.include_local_z) {
        if (max_abs(run.states[i] - closed) > tol)
          throw integrity_error(
              "dephasing evolution disagrees with the closed form at t="
              + format_double(times[i]));
      } else {
        // Local z terms must leave concurrence and purity untouched.
        if (std::abs(concurrence(run.states[i]) - concurrence(closed)) > tol
            || std::abs(purity(run.states[i]) - purity(closed)) > tol)
          throw integrity_error(
              "local z terms changed concurrence or purity at t="
              + format_double(times[i]));
      }
    }
  }
  return run;
}

ProvenanceHeader make_header(const ScenarioConfig& config, const std::string& engine) {
  ProvenanceHeader header;
  header.tool_version = kVersion;
  header.scenario = scenario_name(config.scenario);
  header.engine = engine;
  header.config_hash = config.config_hash;
  header.seed = config.seed;
  header.self_check = config.self_check;
  return header;
}

double micro_scale(const ScenarioConfig& config) {
  switch (config.scenario) {
    case Scenario::Isolated:
      return std::abs(config.omega);
    case Scenario::MicroRandom: {
      const MicroModel model =
          random_model(config.omega, config.environment.n_particles, config.seed);
      const EnvMoments m = env_moments(model);
      return std::max({std::abs(config.omega), std::sqrt(m.sigmaA2),
                       std::sqrt(m.sigmaB2)});
    }
    case Scenario::MicroGravitational: {
      if (!config.gravity || config.gravity->distances_a.empty())
        throw config_error("micro_gravitational requires gravity distance lists");
      GravitationalSpec spec;
      spec.G = config.gravity->G;
      spec.m1 = config.gravity->m1;
      spec.m2 = config.gravity->m2;
      spec.dA = config.gravity->distances_a;
      spec.dB = config.gravity->distances_b;
      const GravitationalModel gm =
          gravitational_model(spec, config.gravity->uniform_weights, config.seed);
      const EnvMoments m = env_moments(gm.model);
      return std::max({std::abs(config.omega), std::sqrt(m.sigmaA2),
                       std::sqrt(m.sigmaB2)});
    }
    default:
      return std::abs(config.omega);
  }
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config) {
  if (config.sweep)
    throw config_error("config contains a sweep section; use the sweep command");
  std::vector<double> times;
  EngineRun engine_run;
  MicroModel micro;

  switch (config.scenario) {
    case Scenario::Isolated:
    case Scenario::MicroRandom:
    case Scenario::MicroGravitational: {
      times = build_times(config.grid ? *config.grid
                                      : default_linear_grid(micro_scale(config)));
      engine_run = run_micro_states(config, times, micro);
      break;
    }
    case Scenario::Lindblad:
    case Scenario::LindbladTdep: {
      const LambdaSchedule schedule =
          config.schedule
              ? *config.schedule
              : (config.scenario == Scenario::Lindblad
                     ? LambdaSchedule::constant(config.lambda)
                     : LambdaSchedule::linear(config.lambda_tilde));
      const double scale = std::max(std::abs(config.omega), schedule_scale(schedule));
      times = build_times(config.grid ? *config.grid : default_linear_grid(scale));
      engine_run = run_lindblad_states(config, times);
      break;
    }
    default:
      throw config_error(std::string(scenario_name(config.scenario))
                         + " is not a trajectory scenario; use its dedicated command");
  }

  const MicroModel reference_model = isolated_model(config.omega);
  RunResult result;
  result.trajectory.header = make_header(config, engine_run.engine);
  result.trajectory.records.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    require_valid(engine_run.states[i], config.positivity_tol, times[i]);
    const DensityMatrix reference = reduced_state(reference_model, times[i]);
    result.trajectory.records.push_back(
        make_record(times[i], config.omega, engine_run.states[i], reference));
  }

  const std::string csv_path = join_path(config.out_dir, config.output.csv);
  write_file(csv_path, trajectory_csv(result.trajectory));
  result.files_written.push_back(csv_path);

  PlotOptions plot;
  const std::string svg_path = join_path(config.out_dir, config.output.svg);
  write_file(svg_path, trajectory_svg(result.trajectory, plot));
  result.files_written.push_back(svg_path);
  return result;
}

CompareResult run_compare(const ScenarioConfig& config) {
  if (config.scenario != Scenario::Compare || !config.compare)
    throw config_error("compare requires a compare scenario config");
  const CompareConfig& cc = *config.compare;
  const double omega = config.omega;
  const double sigma = cc.sigma;
  const double lambda = cc.lambda_rule == "sigma" ? sigma : cc.lambda;
  const double lambda_tilde =
      cc.lambda_tilde_rule == "half_sigma_squared" ? 0.5 * sigma * sigma
                                                   : cc.lambda_tilde;

  MicroModel micro = rescale_to_sigma(
      random_model(omega, cc.n_particles, config.seed), sigma);
  const EnvMoments moments = env_moments(micro);

  const std::vector<double> times =
      build_times(config.grid ? *config.grid : default_log_grid(sigma));

  std::vector<DensityMatrix> micro_states, gksl_states, tdep_states;
  micro_states.reserve(times.size());
  gksl_states.reserve(times.size());
  tdep_states.reserve(times.size());
  for (double t : times) {
    micro_states.push_back(reduced_state(micro, t));
    gksl_states.push_back(dephasing_closed_form(omega, lambda, t));
    tdep_states.push_back(dephasing_time_dependent(omega, lambda_tilde, t));
    require_valid(micro_states.back(), config.positivity_tol, t);
    require_valid(gksl_states.back(), config.positivity_tol, t);
    require_valid(tdep_states.back(), config.positivity_tol, t);
  }

  if (config.self_check) {
    const DensityMatrix rho0 = DensityMatrix::Constant(0.25);
    const LindbladModel gksl = dephasing_model(omega, LambdaSchedule::constant(lambda));
    const LindbladModel tdep =
        dephasing_model(omega, LambdaSchedule::linear(lambda_tilde));
    for (std::size_t i : sample_indices(times.size(), 8)) {
      const DensityMatrix brute = brute_force_reduced_state(micro, times[i]);
      if (max_abs(micro_states[i] - brute) > 1e-12)
        throw integrity_error(
            "microscopic closed form disagrees with the brute-force oracle at t="
            + format_double(times[i]));
      const DensityMatrix expm_state =
          evolve(gksl, rho0, times[i], EvolveMethod::Exponential);
      if (max_abs(gksl_states[i] - expm_state) > 1e-9)
        throw integrity_error("dephasing closed form disagrees with the propagator at t="
                              + format_double(times[i]));
      const DensityMatrix stepped =
          evolve(tdep, rho0, times[i], EvolveMethod::Stepped);
      if (max_abs(tdep_states[i] - stepped) > 1e-8)
        throw integrity_error(
            "time-dependent closed form disagrees with the integrator at t="
            + format_double(times[i]));
    }
  }

  // Purity-deficit fits over the decade [1e-3, 1e-2]/sigma.
  const double window_lo = 1e-3 / sigma;
  const double window_hi = 1e-2 / sigma;
  std::vector<std::pair<double, double>> micro_fit_pts, gksl_fit_pts, tdep_fit_pts;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < window_lo * (1.0 - 1e-12) || t > window_hi * (1.0 + 1e-12)) continue;
    micro_fit_pts.push_back({t, 1.0 - purity(micro_states[i])});
    gksl_fit_pts.push_back({t, 1.0 - purity(gksl_states[i])});
    tdep_fit_pts.push_back({t, 1.0 - purity(tdep_states[i])});
  }
  if (micro_fit_pts.size() < 5)
    throw config_error("compare grid leaves fewer than 5 points in the fit window");
  const PowerLawFit micro_fit = fit_power_law(micro_fit_pts);
  const PowerLawFit gksl_fit = fit_power_law(gksl_fit_pts);
  const PowerLawFit tdep_fit = fit_power_law(tdep_fit_pts);

  // Early-time concurrence slopes via central differences.
  const double scale = std::max(std::abs(omega), sigma);
  const double t0 = 1e-3 / (scale > 0.0 ? scale : 1.0);
  const double dt = t0 / 10.0;
  const auto slope = [&](auto&& state_at) {
    return (concurrence(state_at(t0 + dt)) - concurrence(state_at(t0 - dt)))
           / (2.0 * dt);
  };
  const double micro_slope =
      slope([&](double t) { return reduced_state(micro, t); });
  const double gksl_slope =
      slope([&](double t) { return dephasing_closed_form(omega, lambda, t); });
  const double tdep_slope = slope(
      [&](double t) { return dephasing_time_dependent(omega, lambda_tilde, t); });
  const double gksl_rate = lindblad_concurrence_rate(omega, lambda);

  const double t_star = window_hi;
  const DensityMatrix micro_star = reduced_state(micro, t_star);
  const double fid_gksl =
      fidelity(micro_star, dephasing_closed_form(omega, lambda, t_star));
  const double fid_tdep =
      fidelity(micro_star, dephasing_time_dependent(omega, lambda_tilde, t_star));

  CompareResult result;
  result.micro_exponent = micro_fit.exponent;
  result.micro_prefactor = micro_fit.prefactor;
  result.lindblad_exponent = gksl_fit.exponent;
  result.lindblad_prefactor = gksl_fit.prefactor;
  result.tdep_exponent = tdep_fit.exponent;
  result.tdep_prefactor = tdep_fit.prefactor;
  result.micro_slope = micro_slope;
  result.lindblad_slope = gksl_slope;
  result.tdep_slope = tdep_slope;

  const ProvenanceHeader header =
      make_header(config, "micro-exact+gksl-closed+tdep-closed");
  const std::string columns =
      "t,micro_purity,gksl_purity,tdep_purity,micro_concurrence,"
      "gksl_concurrence,tdep_concurrence,fid_micro_gksl,fid_micro_tdep";
  std::ostringstream csv;
  csv << provenance_block(header, columns);
  csv << columns << "\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    csv << format_double(times[i]) << ',' << format_double(purity(micro_states[i]))
        << ',' << format_double(purity(gksl_states[i])) << ','
        << format_double(purity(tdep_states[i])) << ','
        << format_double(concurrence(micro_states[i])) << ','
        << format_double(concurrence(gksl_states[i])) << ','
        << format_double(concurrence(tdep_states[i])) << ','
        << format_double(fidelity(micro_states[i], gksl_states[i])) << ','
        << format_double(fidelity(micro_states[i], tdep_states[i])) << "\n";
  }

  std::ostringstream report;
  report << "qpairsim " << kVersion << " compare report\n"
         << "config-hash: " << config.config_hash << "\n"
         << "seed: " << config.seed << "\n"
         << "omega: " << format_double(omega) << "\n"
         << "n_particles: " << cc.n_particles << "\n"
         << "sigma target: " << format_double(sigma) << "\n"
         << "sigma_a measured: " << format_double(std::sqrt(moments.sigmaA2)) << "\n"
         << "sigma_b measured: " << format_double(std::sqrt(moments.sigmaB2)) << "\n"
         << "lambda (rule " << cc.lambda_rule << "): " << format_double(lambda) << "\n"
         << "lambda_tilde (rule " << cc.lambda_tilde_rule
         << "): " << format_double(lambda_tilde) << "\n"
         << "fit window: [" << format_double(window_lo) << ", "
         << format_double(window_hi) << "]\n"
         << "purity deficit micro: exponent " << format_double(micro_fit.exponent)
         << ", prefactor " << format_double(micro_fit.prefactor) << ", r2 "
         << format_double(micro_fit.r_squared) << "\n"
         << "purity deficit gksl: exponent " << format_double(gksl_fit.exponent)
         << ", prefactor " << format_double(gksl_fit.prefactor) << ", r2 "
         << format_double(gksl_fit.r_squared) << "\n"
         << "purity deficit tdep: exponent " << format_double(tdep_fit.exponent)
         << ", prefactor " << format_double(tdep_fit.prefactor) << ", r2 "
         << format_double(tdep_fit.r_squared) << "\n"
         << "expected prefactors: micro sigma^2 = " << format_double(sigma * sigma)
         << ", gksl 4 lambda = " << format_double(4.0 * lambda)
         << ", tdep 2 lambda_tilde = " << format_double(2.0 * lambda_tilde) << "\n"
         << "concurrence slope at t0=" << format_double(t0) << ": micro "
         << format_double(micro_slope) << ", gksl " << format_double(gksl_slope)
         << ", gksl analytic " << format_double(gksl_rate) << ", tdep "
         << format_double(tdep_slope) << "\n"
         << "fidelity micro vs gksl at t=" << format_double(t_star) << ": "
         << format_double(fid_gksl) << "\n"
         << "fidelity micro vs tdep at t=" << format_double(t_star) << ": "
         << format_double(fid_tdep) << "\n";

  result.csv_path = join_path(config.out_dir, config.output.csv);
  write_file(result.csv_path, csv.str());
  result.files_written.push_back(result.csv_path);
  result.report_path = join_path(config.out_dir, config.output.report);
  write_file(result.report_path, report.str());
  result.files_written.push_back(result.report_path);
  return result;
}

SweepResult run_sweep(const ScenarioConfig& config) {
  if (!config.sweep) throw config_error("config has no sweep section");
  const SweepConfig& sweep = *config.sweep;

  // Row-invariant key: identifies cached rows independently of the value
  // list, so resumed runs only compute what is new.
  std::ostringstream key;
  key << "scenario=" << scenario_name(config.scenario) << " omega="
      << format_double(config.omega) << " seed=" << config.seed
      << " parameter=" << sweep.parameter;
  std::string columns;
  if (sweep.parameter == "lambda") {
    if (config.scenario != Scenario::Lindblad)
      throw config_error("lambda sweeps require the lindblad scenario");
    if (config.omega == 0.0) throw config_error("lambda sweeps require omega != 0");
    columns = "lambda,slope_estimate,slope_analytic,concurrence_peak,entangling";
  } else {
    if (config.scenario != Scenario::MicroGravitational)
      throw config_error("n_particles sweeps require the micro_gravitational scenario");
    const GravityConfig& g = config.gravity ? *config.gravity : GravityConfig{};
    key << " g_constant=" << format_double(g.G) << " m1=" << format_double(g.m1)
        << " m2=" << format_double(g.m2) << " uniform="
        << (g.uniform_weights ? 1 : 0)
        << " d_min=" << format_double(g.distance_min)
        << " d_max=" << format_double(g.distance_max);
    columns =
        "n_particles,sigma_a2,sigma_b2,deficit_coeff_predicted,"
        "deficit_coeff_measured";
  }
  const std::string sweep_key = fnv1a_hex(key.str());

  SweepResult result;
  result.csv_path = join_path(config.out_dir, config.output.csv);

  // Reusable rows from a previous run with the same key.
  std::map<std::string, std::string> cached;
  if (sweep.resume && std::filesystem::exists(result.csv_path)) {
    std::istringstream in(read_file(result.csv_path));
    std::string line;
    bool key_matches = false;
    bool past_header = false;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line[0] == '#') {
        if (line == "# sweep-key: " + sweep_key) key_matches = true;
        continue;
      }
      if (!past_header) {
        past_header = true;  // column header row
        continue;
      }
      const std::size_t comma = line.find(',');
      if (comma != std::string::npos) cached[line.substr(0, comma)] = line;
    }
    if (!key_matches) cached.clear();
  }

  const auto lambda_row = [&](double lambda) {
    const double estimate = dephasing_growth_estimate(config.omega, lambda);
    const double analytic = lindblad_concurrence_rate(config.omega, lambda);
    const double scale = std::max(std::abs(config.omega), lambda);
    double peak = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double t = 3.0 / scale * i / 199.0;
      peak = std::max(peak,
                      concurrence(dephasing_closed_form(config.omega, lambda, t)));
    }
    std::ostringstream row;
    row << format_double(lambda) << ',' << format_double(estimate) << ','
        << format_double(analytic) << ',' << format_double(peak) << ','
        << (analytic > 0.0 ? 1 : 0);
    return row.str();
  };

  const auto gravity_row = [&](double value, std::size_t index) {
    const int n = static_cast<int>(value);
    const GravityConfig& g = *config.gravity;
    Rng rng(derive_seed(config.seed, index));
    GravitationalSpec spec;
    spec.G = g.G;
    spec.m1 = g.m1;
    spec.m2 = g.m2;
    spec.dA.resize(static_cast<std::size_t>(n));
    spec.dB.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      spec.dA[static_cast<std::size_t>(i)] = rng.uniform(g.distance_min, g.distance_max);
    for (int i = 0; i < n; ++i)
      spec.dB[static_cast<std::size_t>(i)] = rng.uniform(g.distance_min, g.distance_max);
    const GravitationalModel gm =
        gravitational_model(spec, g.uniform_weights, derive_seed(config.seed, index));
    const EnvMoments m = env_moments(gm.model);
    const double coeff = 0.5 * (m.sigmaA2 + m.sigmaB2);
    const double sbar = std::sqrt(std::max(coeff, 1e-300));
    const double t_star = 1e-3 / std::max(sbar, std::abs(config.omega));
    const DensityMatrix rho = reduced_state(gm.model, t_star);
    const double measured = (1.0 - purity(rho)) / (t_star * t_star);
    std::ostringstream row;
    row << n << ',' << format_double(m.sigmaA2) << ',' << format_double(m.sigmaB2)
        << ',' << format_double(coeff) << ',' << format_double(measured);
    return row.str();
  };

  std::vector<std::string> rows;
  for (std::size_t i = 0; i < sweep.values.size(); ++i) {
    const double value = sweep.values[i];
    const std::string value_key = sweep.parameter == "lambda"
                                      ? format_double(value)
                                      : std::to_string(static_cast<int>(value));
    const auto hit = cached.find(value_key);
    if (hit != cached.end()) {
      rows.push_back(hit->second);
      ++result.rows_reused;
      continue;
    }
    rows.push_back(sweep.parameter == "lambda" ? lambda_row(value)
                                               : gravity_row(value, i));
    ++result.rows_written;
  }

  const ProvenanceHeader header = make_header(config, "sweep");
  std::ostringstream csv;
  csv << provenance_block(header, columns);
  csv << "# sweep-key: " << sweep_key << "\n";
  csv << columns << "\n";
  for (const std::string& row : rows) csv << row << "\n";
  write_file(result.csv_path, csv.str());
  return result;
}

ScanRunResult run_threshold_scan(const ScenarioConfig& config) {
  if (config.scenario != Scenario::ThresholdScan || !config.scan)
    throw config_error("scan-threshold requires a threshold_scan scenario config");
  const ScanConfig& scan = *config.scan;

  const ThresholdResult estimated =
      threshold_scan(config.omega, scan.lambda_min, scan.lambda_max, scan.resolution);
  const ThresholdResult analytic = threshold_scan_analytic(
      config.omega, scan.lambda_min, scan.lambda_max, scan.resolution);

  ScanRunResult result;
  result.lambda_star = estimated.lambda_star;
  result.analytic_root = analytic.lambda_star;

  const ProvenanceHeader header = make_header(config, "gksl-estimated+analytic");
  const std::string columns = "lambda,growth_estimate,growth_analytic";
  std::ostringstream csv;
  csv << provenance_block(header, columns);
  csv << columns << "\n";
  for (const auto& [lambda, estimate] : estimated.scan_points) {
    csv << format_double(lambda) << ',' << format_double(estimate) << ','
        << format_double(lindblad_concurrence_rate(config.omega, lambda)) << "\n";
  }

  std::ostringstream report;
  report << "qpairsim " << kVersion << " threshold scan\n"
         << "config-hash: " << config.config_hash << "\n"
         << "omega: " << format_double(config.omega) << "\n"
         << "scan range: [" << format_double(scan.lambda_min) << ", "
         << format_double(scan.lambda_max) << "], resolution "
         << format_double(scan.resolution) << "\n"
         << "estimated lambda_star: " << format_double(estimated.lambda_star) << "\n"
         << "estimated bracket: [" << format_double(estimated.bracket_low) << ", "
         << format_double(estimated.bracket_high) << "]\n"
         << "analytic lambda_star: " << format_double(analytic.lambda_star) << "\n"
         << "reference |omega|: " << format_double(std::abs(config.omega)) << "\n"
         << "estimated minus analytic: "
         << format_double(estimated.lambda_star - analytic.lambda_star) << "\n";

  const std::string csv_path = join_path(config.out_dir, config.output.csv);
  write_file(csv_path, csv.str());
  result.files_written.push_back(csv_path);
  const std::string report_path = join_path(config.out_dir, config.output.report);
  write_file(report_path, report.str());
  result.files_written.push_back(report_path);
  return result;
}

std::string replot(const std::string& csv_path, const std::string& out_dir,
                   const PlotOptions& options) {
  const Trajectory trajectory = parse_trajectory_csv(read_file(csv_path));
  const std::string stem = std::filesystem::path(csv_path).stem().string();
  const std::string name = stem + (options.log_log ? "_loglog.svg" : ".svg");
  const std::string path = join_path(out_dir, name);
  write_file(path, trajectory_svg(trajectory, options));
  return path;
}

}  // namespace qpair
