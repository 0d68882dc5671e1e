#include "qpair/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "qpair/errors.hpp"
#include "qpair/trajectory.hpp"

namespace qpair {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw config_error(msg); }

void check_keys(const json& obj, const std::string& context,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known) fail("unknown key '" + item.key() + "' in " + context);
  }
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double get_double(const json& obj, const char* key, double fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number()) fail(std::string("'") + key + "' must be a number");
  const double x = v->get<double>();
  if (!std::isfinite(x)) fail(std::string("'") + key + "' must be finite");
  return x;
}

int get_int(const json& obj, const char* key, int fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) fail(std::string("'") + key + "' must be an integer");
  return v->get<int>();
}

bool get_bool(const json& obj, const char* key, bool fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_boolean()) fail(std::string("'") + key + "' must be a boolean");
  return v->get<bool>();
}

std::string get_string(const json& obj, const char* key, const std::string& fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_string()) fail(std::string("'") + key + "' must be a string");
  return v->get<std::string>();
}

std::uint64_t get_seed(const json& obj, const char* key, std::uint64_t fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer() || (v->is_number_integer() && v->get<long long>() < 0))
    fail(std::string("'") + key + "' must be a nonnegative integer");
  return v->get<std::uint64_t>();
}

std::vector<double> get_double_list(const json& v, const std::string& context) {
  if (!v.is_array()) fail(context + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) fail(context + " must contain only numbers");
    const double value = x.get<double>();
    if (!std::isfinite(value)) fail(context + " must contain finite numbers");
    out.push_back(value);
  }
  return out;
}

Scenario parse_scenario(const std::string& name) {
  if (name == "isolated") return Scenario::Isolated;
  if (name == "micro_random") return Scenario::MicroRandom;
  if (name == "micro_gravitational") return Scenario::MicroGravitational;
  if (name == "lindblad") return Scenario::Lindblad;
  if (name == "lindblad_tdep") return Scenario::LindbladTdep;
  if (name == "compare") return Scenario::Compare;
  if (name == "threshold_scan") return Scenario::ThresholdScan;
  fail("unknown scenario '" + name + "'");
}

LambdaSchedule parse_schedule(const json& obj) {
  check_keys(obj, "schedule", {"kind", "lambda", "lambda_tilde", "table"});
  const std::string kind = get_string(obj, "kind", "constant");
  if (kind == "constant") {
    const double lambda = get_double(obj, "lambda", 0.0);
    if (lambda < 0.0) fail("schedule lambda must be >= 0");
    return LambdaSchedule::constant(lambda);
  }
  if (kind == "linear") {
    const double lt = get_double(obj, "lambda_tilde", 0.0);
    if (lt < 0.0) fail("schedule lambda_tilde must be >= 0");
    return LambdaSchedule::linear(lt);
  }
  if (kind == "tabulated") {
    const json* table = find(obj, "table");
    if (!table || !table->is_array()) fail("tabulated schedule requires a 'table' array");
    std::vector<std::pair<double, double>> nodes;
    for (const auto& row : *table) {
      if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
        fail("schedule table rows must be [time, rate] pairs");
      nodes.push_back({row[0].get<double>(), row[1].get<double>()});
    }
    try {
      return LambdaSchedule::tabulated(std::move(nodes));
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
  fail("schedule kind must be constant, linear, or tabulated");
}

TimeGridConfig parse_grid(const json& obj) {
  check_keys(obj, "grid", {"t_max", "points", "spacing", "t_min"});
  TimeGridConfig grid;
  grid.t_max = get_double(obj, "t_max", 0.0);
  if (!(grid.t_max > 0.0)) fail("grid t_max must be positive");
  grid.points = get_int(obj, "points", 200);
  if (grid.points < 2) fail("grid points must be >= 2");
  const std::string spacing = get_string(obj, "spacing", "linear");
  if (spacing == "linear") {
    grid.spacing = TimeGridConfig::Spacing::Linear;
  } else if (spacing == "log") {
    grid.spacing = TimeGridConfig::Spacing::Log;
    grid.t_min = get_double(obj, "t_min", 0.0);
    if (!(grid.t_min > 0.0) || !(grid.t_min < grid.t_max))
      fail("log grid requires 0 < t_min < t_max");
  } else {
    fail("grid spacing must be 'linear' or 'log'");
  }
  if (spacing != "log" && find(obj, "t_min")) fail("grid t_min only applies to log spacing");
  return grid;
}

GravityConfig parse_gravity(const json& obj) {
  check_keys(obj, "gravity",
             {"g_constant", "m1", "m2", "distances_a", "distances_b",
              "uniform_weights", "distance_min", "distance_max"});
  GravityConfig g;
  g.G = get_double(obj, "g_constant", 1.0);
  g.m1 = get_double(obj, "m1", 2.0);
  g.m2 = get_double(obj, "m2", 1.0);
  g.uniform_weights = get_bool(obj, "uniform_weights", true);
  g.distance_min = get_double(obj, "distance_min", 0.5);
  g.distance_max = get_double(obj, "distance_max", 3.0);
  if (!(g.distance_min > 0.0) || !(g.distance_max >= g.distance_min))
    fail("gravity distance range must satisfy 0 < distance_min <= distance_max");
  if (const json* da = find(obj, "distances_a"))
    g.distances_a = get_double_list(*da, "gravity distances_a");
  if (const json* db = find(obj, "distances_b"))
    g.distances_b = get_double_list(*db, "gravity distances_b");
  if (g.distances_a.size() != g.distances_b.size())
    fail("gravity distance lists must have equal length");
  for (double d : g.distances_a)
    if (!(d > 0.0)) fail("gravity distances must be positive");
  for (double d : g.distances_b)
    if (!(d > 0.0)) fail("gravity distances must be positive");
  return g;
}

CompareConfig parse_compare(const json& obj) {
  check_keys(obj, "compare",
             {"sigma", "n_particles", "lambda_rule", "lambda",
              "lambda_tilde_rule", "lambda_tilde"});
  CompareConfig c;
  c.sigma = get_double(obj, "sigma", 1.0);
  if (!(c.sigma > 0.0)) fail("compare sigma must be positive");
  c.n_particles = get_int(obj, "n_particles", 8);
  if (c.n_particles < 1 || c.n_particles > 12)
    fail("compare n_particles must be in [1, 12]");
  c.lambda_rule = get_string(obj, "lambda_rule", "sigma");
  if (c.lambda_rule != "sigma" && c.lambda_rule != "explicit")
    fail("compare lambda_rule must be 'sigma' or 'explicit'");
  c.lambda = get_double(obj, "lambda", 0.0);
  if (c.lambda_rule == "explicit" && !(c.lambda >= 0.0))
    fail("explicit compare lambda must be >= 0");
  if (c.lambda_rule != "explicit" && find(obj, "lambda"))
    fail("compare lambda only applies with lambda_rule 'explicit'");
  c.lambda_tilde_rule = get_string(obj, "lambda_tilde_rule", "half_sigma_squared");
  if (c.lambda_tilde_rule != "half_sigma_squared" && c.lambda_tilde_rule != "explicit")
    fail("compare lambda_tilde_rule must be 'half_sigma_squared' or 'explicit'");
  c.lambda_tilde = get_double(obj, "lambda_tilde", 0.0);
  if (c.lambda_tilde_rule == "explicit" && !(c.lambda_tilde >= 0.0))
    fail("explicit compare lambda_tilde must be >= 0");
  if (c.lambda_tilde_rule != "explicit" && find(obj, "lambda_tilde"))
    fail("compare lambda_tilde only applies with lambda_tilde_rule 'explicit'");
  return c;
}

ScanConfig parse_scan(const json& obj, double omega) {
  check_keys(obj, "scan", {"lambda_min", "lambda_max", "resolution"});
  ScanConfig s;
  s.lambda_min = get_double(obj, "lambda_min", 0.5 * std::abs(omega));
  s.lambda_max = get_double(obj, "lambda_max", 1.5 * std::abs(omega));
  s.resolution = get_double(obj, "resolution", 0.005);
  if (!(s.lambda_min >= 0.0) || !(s.lambda_min < s.lambda_max))
    fail("scan requires 0 <= lambda_min < lambda_max");
  if (!(s.resolution > 0.0)) fail("scan resolution must be positive");
  return s;
}

SweepConfig parse_sweep(const json& obj) {
  check_keys(obj, "sweep", {"parameter", "values", "resume"});
  SweepConfig s;
  s.parameter = get_string(obj, "parameter", "");
  if (s.parameter != "lambda" && s.parameter != "n_particles")
    fail("sweep parameter must be 'lambda' or 'n_particles'");
  const json* values = find(obj, "values");
  if (!values) fail("sweep requires a 'values' array");
  s.values = get_double_list(*values, "sweep values");
  if (s.parameter == "lambda") {
    for (double v : s.values)
      if (v < 0.0) fail("sweep lambda values must be >= 0");
  } else {
    for (double v : s.values)
      if (v < 1.0 || v > 12.0 || v != std::floor(v))
        fail("sweep n_particles values must be integers in [1, 12]");
  }
  s.resume = get_bool(obj, "resume", false);
  return s;
}

json schedule_json(const LambdaSchedule& s) {
  json j;
  switch (s.kind) {
    case LambdaSchedule::Kind::Constant:
      j["kind"] = "constant";
      j["lambda"] = s.lambda;
      break;
    case LambdaSchedule::Kind::Linear:
      j["kind"] = "linear";
      j["lambda_tilde"] = s.lambda_tilde;
      break;
    case LambdaSchedule::Kind::Tabulated: {
      j["kind"] = "tabulated";
      json table = json::array();
      for (const auto& [t, r] : s.table) table.push_back({t, r});
      j["table"] = table;
      break;
    }
  }
  return j;
}

// Canonical physics-relevant view of the effective configuration; output
// locations are excluded so identical physics hashes identically anywhere.
std::string canonical_text(const ScenarioConfig& c) {
  json j;
  j["scenario"] = scenario_name(c.scenario);
  j["omega"] = c.omega;
  j["seed"] = c.seed;
  j["positivity_tol"] = c.positivity_tol;
  j["self_check"] = c.self_check;
  switch (c.scenario) {
    case Scenario::Lindblad:
    case Scenario::LindbladTdep:
      j["lambda"] = c.lambda;
      j["lambda_tilde"] = c.lambda_tilde;
      if (c.schedule) j["schedule"] = schedule_json(*c.schedule);
      j["include_local_z"] = c.include_local_z;
      j["c_a"] = c.cA;
      j["c_b"] = c.cB;
      break;
    case Scenario::MicroRandom:
      j["n_particles"] = c.environment.n_particles;
      break;
    case Scenario::Compare:
      j["n_particles"] = c.compare->n_particles;
      j["sigma"] = c.compare->sigma;
      j["lambda_rule"] = c.compare->lambda_rule;
      j["lambda"] = c.compare->lambda;
      j["lambda_tilde_rule"] = c.compare->lambda_tilde_rule;
      j["lambda_tilde"] = c.compare->lambda_tilde;
      break;
    case Scenario::MicroGravitational: {
      json g;
      g["g_constant"] = c.gravity->G;
      g["m1"] = c.gravity->m1;
      g["m2"] = c.gravity->m2;
      g["distances_a"] = c.gravity->distances_a;
      g["distances_b"] = c.gravity->distances_b;
      g["uniform_weights"] = c.gravity->uniform_weights;
      g["distance_min"] = c.gravity->distance_min;
      g["distance_max"] = c.gravity->distance_max;
      j["gravity"] = g;
      break;
    }
    case Scenario::ThresholdScan:
      j["lambda_min"] = c.scan->lambda_min;
      j["lambda_max"] = c.scan->lambda_max;
      j["resolution"] = c.scan->resolution;
      break;
    case Scenario::Isolated:
      break;
  }
  if (c.grid) {
    json g;
    g["t_max"] = c.grid->t_max;
    g["points"] = c.grid->points;
    g["spacing"] = c.grid->spacing == TimeGridConfig::Spacing::Log ? "log" : "linear";
    g["t_min"] = c.grid->t_min;
    j["grid"] = g;
  }
  if (c.sweep) {
    json s;
    s["parameter"] = c.sweep->parameter;
    s["values"] = c.sweep->values;
    j["sweep"] = s;
  }
  return j.dump();
}

}  // namespace

const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::Isolated:
      return "isolated";
    case Scenario::MicroRandom:
      return "micro_random";
    case Scenario::MicroGravitational:
      return "micro_gravitational";
    case Scenario::Lindblad:
      return "lindblad";
    case Scenario::LindbladTdep:
      return "lindblad_tdep";
    case Scenario::Compare:
      return "compare";
    case Scenario::ThresholdScan:
      return "threshold_scan";
  }
  return "unknown";
}

ScenarioConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("config must be a JSON object");

  const json* scenario_field = find(doc, "scenario");
  if (!scenario_field || !scenario_field->is_string())
    fail("config requires a 'scenario' string");
  ScenarioConfig c;
  c.scenario = parse_scenario(scenario_field->get<std::string>());

  std::vector<const char*> allowed = {"scenario", "omega", "seed",
                                      "tolerances", "output", "grid"};
  switch (c.scenario) {
    case Scenario::Isolated:
      break;
    case Scenario::MicroRandom:
      allowed.push_back("environment");
      break;
    case Scenario::MicroGravitational:
      allowed.push_back("gravity");
      allowed.push_back("sweep");
      break;
    case Scenario::Lindblad:
      allowed.insert(allowed.end(),
                     {"lambda", "schedule", "include_local_z", "c_a", "c_b", "sweep"});
      break;
    case Scenario::LindbladTdep:
      allowed.insert(allowed.end(),
                     {"lambda_tilde", "schedule", "include_local_z", "c_a", "c_b"});
      break;
    case Scenario::Compare:
      allowed.push_back("compare");
      break;
    case Scenario::ThresholdScan:
      allowed.push_back("scan");
      break;
  }
  for (const auto& item : doc.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known)
      fail("unknown key '" + item.key() + "' for scenario "
           + std::string(scenario_name(c.scenario)));
  }

  c.omega = get_double(doc, "omega", 1.0);
  c.seed = get_seed(doc, "seed", 1);

  if (const json* tol = find(doc, "tolerances")) {
    if (!tol->is_object()) fail("'tolerances' must be an object");
    check_keys(*tol, "tolerances", {"positivity"});
    c.positivity_tol = get_double(*tol, "positivity", 1e-9);
    if (!(c.positivity_tol > 0.0)) fail("positivity tolerance must be positive");
  }

  if (const json* grid = find(doc, "grid")) {
    if (!grid->is_object()) fail("'grid' must be an object");
    c.grid = parse_grid(*grid);
  }

  switch (c.scenario) {
    case Scenario::Isolated:
      break;
    case Scenario::MicroRandom: {
      if (const json* env = find(doc, "environment")) {
        if (!env->is_object()) fail("'environment' must be an object");
        check_keys(*env, "environment", {"n_particles"});
        c.environment.n_particles = get_int(*env, "n_particles", 6);
      }
      if (c.environment.n_particles < 1 || c.environment.n_particles > 12)
        fail("environment n_particles must be in [1, 12]");
      break;
    }
    case Scenario::MicroGravitational: {
      const json* gravity = find(doc, "gravity");
      GravityConfig g = gravity ? parse_gravity(*gravity) : GravityConfig{};
      c.gravity = g;
      if (const json* sweep = find(doc, "sweep")) {
        if (!sweep->is_object()) fail("'sweep' must be an object");
        c.sweep = parse_sweep(*sweep);
        if (c.sweep->parameter != "n_particles")
          fail("micro_gravitational sweeps run over 'n_particles'");
      } else if (c.gravity->distances_a.empty()) {
        fail("micro_gravitational requires gravity distance lists (or a sweep)");
      }
      break;
    }
    case Scenario::Lindblad: {
      c.lambda = get_double(doc, "lambda", 0.5);
      if (c.lambda < 0.0) fail("lambda must be >= 0");
      if (const json* sched = find(doc, "schedule")) {
        if (!sched->is_object()) fail("'schedule' must be an object");
        c.schedule = parse_schedule(*sched);
      }
      c.include_local_z = get_bool(doc, "include_local_z", false);
      c.cA = get_double(doc, "c_a", 0.0);
      c.cB = get_double(doc, "c_b", 0.0);
      if (const json* sweep = find(doc, "sweep")) {
        if (!sweep->is_object()) fail("'sweep' must be an object");
        c.sweep = parse_sweep(*sweep);
        if (c.sweep->parameter != "lambda") fail("lindblad sweeps run over 'lambda'");
      }
      break;
    }
    case Scenario::LindbladTdep: {
      c.lambda_tilde = get_double(doc, "lambda_tilde", 0.5);
      if (c.lambda_tilde < 0.0) fail("lambda_tilde must be >= 0");
      if (const json* sched = find(doc, "schedule")) {
        if (!sched->is_object()) fail("'schedule' must be an object");
        c.schedule = parse_schedule(*sched);
        if (c.schedule->kind == LambdaSchedule::Kind::Constant)
          fail("lindblad_tdep requires a non-constant schedule");
      }
      c.include_local_z = get_bool(doc, "include_local_z", false);
      c.cA = get_double(doc, "c_a", 0.0);
      c.cB = get_double(doc, "c_b", 0.0);
      break;
    }
    case Scenario::Compare: {
      const json* cmp = find(doc, "compare");
      if (cmp && !cmp->is_object()) fail("'compare' must be an object");
      c.compare = cmp ? parse_compare(*cmp) : CompareConfig{};
      break;
    }
    case Scenario::ThresholdScan: {
      if (c.omega == 0.0) fail("threshold_scan requires omega != 0");
      const json* scan = find(doc, "scan");
      if (scan && !scan->is_object()) fail("'scan' must be an object");
      c.scan = scan ? parse_scan(*scan, c.omega) : parse_scan(json::object(), c.omega);
      break;
    }
  }

  if (const json* output = find(doc, "output")) {
    if (!output->is_object()) fail("'output' must be an object");
    check_keys(*output, "output", {"csv", "svg", "report"});
    c.output.csv = get_string(*output, "csv", "");
    c.output.svg = get_string(*output, "svg", "");
    c.output.report = get_string(*output, "report", "");
  }
  const std::string stem = scenario_name(c.scenario);
  if (c.output.csv.empty()) c.output.csv = stem + std::string(".csv");
  if (c.output.svg.empty()) c.output.svg = stem + std::string(".svg");
  if (c.output.report.empty()) c.output.report = stem + std::string("_report.txt");

  c.config_hash = fnv1a_hex(canonical_text(c));
  return c;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void apply_overrides(ScenarioConfig& config, const CliOverrides& overrides) {
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.out_dir) config.out_dir = *overrides.out_dir;
  if (overrides.tolerance) {
    if (!(*overrides.tolerance > 0.0)) fail("tolerance override must be positive");
    config.positivity_tol = *overrides.tolerance;
  }
  if (overrides.self_check) config.self_check = true;
  config.config_hash = fnv1a_hex(canonical_text(config));
}

}  // namespace qpair
