#include "corr/bench/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "json.hpp"

namespace corr::bench {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, std::string_view where) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw std::invalid_argument(fmt::format("unknown key '{}' in {}", item.key(), where));
    }
  }
}

template <typename T>
T get_field(const json& obj, const char* key, const T& fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(fmt::format("bad value for '{}': {}", key, e.what()));
  }
}

json corr_to_json(const CorrConfig& c) {
  json j;
  j["mu_grid_points"] = c.mu_grid_points;
  j["refine_iters"] = c.refine_iters;
  j["r_override"] = c.r_override ? json(*c.r_override) : json(nullptr);
  j["box_bound"] = c.box_bound;
  j["lp_tol"] = c.lp_tol;
  j["ball_tol"] = c.ball_tol;
  j["polish"] = c.polish;
  j["polish_budget"] = c.polish_budget;
  return j;
}

CorrConfig corr_from_json(const json& j, CorrConfig c) {
  if (!j.is_object()) throw std::invalid_argument("'corr' must be an object");
  check_keys(j,
             {"mu_grid_points", "refine_iters", "r_override", "box_bound", "lp_tol", "ball_tol",
              "polish", "polish_budget"},
             "corr");
  c.mu_grid_points = get_field(j, "mu_grid_points", c.mu_grid_points);
  c.refine_iters = get_field(j, "refine_iters", c.refine_iters);
  if (j.contains("r_override")) {
    if (j.at("r_override").is_null()) {
      c.r_override.reset();
    } else {
      c.r_override = get_field(j, "r_override", 0.0);
    }
  }
  c.box_bound = get_field(j, "box_bound", c.box_bound);
  c.lp_tol = get_field(j, "lp_tol", c.lp_tol);
  c.ball_tol = get_field(j, "ball_tol", c.ball_tol);
  c.polish = get_field(j, "polish", c.polish);
  c.polish_budget = get_field(j, "polish_budget", c.polish_budget);
  return c;
}

json to_json_tree(const ExperimentConfig& cfg, bool with_local) {
  json j;
  j["experiment"] = std::string(to_string(cfg.experiment));
  json fns = json::array();
  for (FunctionName f : cfg.functions) fns.push_back(std::string(to_string(f)));
  j["functions"] = fns;
  j["dims"] = cfg.dims;
  j["t_values"] = cfg.t_values;
  j["trials"] = cfg.trials;
  j["base_seed"] = cfg.base_seed;
  json methods = json::array();
  for (Method m : cfg.methods) methods.push_back(std::string(to_string(m)));
  j["methods"] = methods;
  j["corr"] = corr_to_json(cfg.corr);
  j["trace_mu"] = cfg.trace_mu;
  j["trace_points"] = cfg.trace_points;
  if (with_local) {
    j["workers"] = cfg.workers;
    j["output_dir"] = cfg.output_dir.generic_string();
  }
  return j;
}

}  // namespace

std::string_view to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::optimize:
      return "optimize";
    case Experiment::sweep:
      return "sweep";
    case Experiment::scale:
      return "scale";
    case Experiment::compare:
      return "compare";
    case Experiment::mu_trace:
      return "mu_trace";
  }
  return "unknown";
}

Experiment parse_experiment(std::string_view token) {
  if (token == "mu-trace") return Experiment::mu_trace;
  for (Experiment e : {Experiment::optimize, Experiment::sweep, Experiment::scale,
                       Experiment::compare, Experiment::mu_trace}) {
    if (to_string(e) == token) return e;
  }
  throw std::invalid_argument(fmt::format("unknown experiment '{}'", token));
}

void ExperimentConfig::validate() const {
  if (functions.empty()) throw std::invalid_argument("functions must not be empty");
  if (dims.empty()) throw std::invalid_argument("dims must not be empty");
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument(fmt::format("dims must be >= 1 (got {})", d));
  }
  if (t_values.empty()) throw std::invalid_argument("t_values must not be empty");
  for (std::size_t i = 0; i < t_values.size(); ++i) {
    if (t_values[i] < 1) throw std::invalid_argument("t_values must be >= 1");
    if (i > 0 && t_values[i] <= t_values[i - 1]) {
      throw std::invalid_argument("t_values must be strictly increasing");
    }
  }
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (methods.empty()) throw std::invalid_argument("methods must not be empty");
  if (trace_points < 3) throw std::invalid_argument("trace_points must be >= 3");
  if (workers < 0) throw std::invalid_argument("workers must be >= 0");
  corr.validate();
}

ExperimentConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(fmt::format("config is not valid JSON: {}", e.what()));
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  check_keys(j,
             {"experiment", "function", "functions", "dims", "t_values", "trials", "base_seed",
              "methods", "corr", "trace_mu", "trace_points", "workers", "output_dir"},
             "config");

  ExperimentConfig cfg;
  if (j.contains("experiment")) {
    cfg.experiment = parse_experiment(get_field<std::string>(j, "experiment", ""));
  }
  if (j.contains("function") && j.contains("functions")) {
    throw std::invalid_argument("give either 'function' or 'functions', not both");
  }
  if (j.contains("function")) {
    cfg.functions = {parse_function_name(get_field<std::string>(j, "function", ""))};
  }
  if (j.contains("functions")) {
    cfg.functions.clear();
    for (const auto& name : get_field<std::vector<std::string>>(j, "functions", {})) {
      cfg.functions.push_back(parse_function_name(name));
    }
  }
  cfg.dims = get_field(j, "dims", cfg.dims);
  cfg.t_values = get_field(j, "t_values", cfg.t_values);
  cfg.trials = get_field(j, "trials", cfg.trials);
  cfg.base_seed = get_field(j, "base_seed", cfg.base_seed);
  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const auto& name : get_field<std::vector<std::string>>(j, "methods", {})) {
      cfg.methods.push_back(parse_method(name));
    }
  }
  if (j.contains("corr")) cfg.corr = corr_from_json(j.at("corr"), cfg.corr);
  cfg.trace_mu = get_field(j, "trace_mu", cfg.trace_mu);
  cfg.trace_points = get_field(j, "trace_points", cfg.trace_points);
  cfg.workers = get_field(j, "workers", cfg.workers);
  if (j.contains("output_dir")) cfg.output_dir = get_field<std::string>(j, "output_dir", "");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(fmt::format("cannot open config '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return config_from_json(text.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  return to_json_tree(cfg, true).dump(2) + "\n";
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = to_json_tree(cfg, false).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", h).substr(0, 12);
}

}  // namespace corr::bench
