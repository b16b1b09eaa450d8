#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "corr/bench/experiments.hpp"

namespace {

using corr::bench::Experiment;
using corr::bench::ExperimentConfig;

struct Overrides {
  std::string config;
  std::vector<std::string> functions;
  std::vector<int> dims;
  std::vector<std::size_t> t_values;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> methods;
  bool polish = false;
  std::optional<int> workers;
  std::optional<int> grid;
  bool quiet = false;
};

ExperimentConfig defaults_for(Experiment e) {
  using corr::FunctionName;
  using corr::Method;
  ExperimentConfig cfg;
  cfg.experiment = e;
  switch (e) {
    case Experiment::optimize:
      cfg.trials = 1;
      break;
    case Experiment::sweep:
      cfg.functions.assign(corr::kAllFunctions.begin(), corr::kAllFunctions.end());
      cfg.t_values = {20, 50, 100, 200, 500, 1000};
      break;
    case Experiment::scale:
      cfg.dims = {1, 2, 5};
      cfg.t_values = {1000, 10000, 100000};
      break;
    case Experiment::compare:
      cfg.dims = {1, 5, 10};
      cfg.t_values = {100000};
      cfg.corr.mu_grid_points = 129;
      cfg.methods = {Method::corr, Method::corr_hybrid, Method::random_search,
                     Method::simulated_annealing, Method::nelder_mead};
      break;
    case Experiment::mu_trace:
      cfg.functions = {FunctionName::salomon_sq};
      cfg.t_values = {2000};
      cfg.trials = 1;
      break;
  }
  return cfg;
}

ExperimentConfig build_config(Experiment e, const Overrides& o) {
  ExperimentConfig cfg = o.config.empty() ? defaults_for(e) : corr::bench::load_config(o.config);
  cfg.experiment = e;
  if (!o.functions.empty()) {
    cfg.functions.clear();
    for (const auto& f : o.functions) cfg.functions.push_back(corr::parse_function_name(f));
  }
  if (!o.dims.empty()) cfg.dims = o.dims;
  if (!o.t_values.empty()) cfg.t_values = o.t_values;
  if (o.trials) cfg.trials = *o.trials;
  if (o.seed) cfg.base_seed = *o.seed;
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (!o.methods.empty()) {
    cfg.methods.clear();
    for (const auto& m : o.methods) cfg.methods.push_back(corr::parse_method(m));
  }
  if (o.polish) cfg.corr.polish = true;
  if (o.workers) cfg.workers = *o.workers;
  if (o.grid) cfg.corr.mu_grid_points = *o.grid;
  cfg.validate();
  return cfg;
}

void add_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--function", o.functions, "test function(s), comma separated")->delimiter(',');
  cmd->add_option("--dim", o.dims, "dimension(s), comma separated")->delimiter(',');
  cmd->add_option("--t", o.t_values, "samples per set, comma separated and increasing")
      ->delimiter(',');
  cmd->add_option("--trials", o.trials, "trials per cell");
  cmd->add_option("--seed", o.seed, "base seed");
  cmd->add_option("--out", o.out, "output directory (default: results)");
  cmd->add_option("--method", o.methods,
                  "corr, corr_hybrid, random_search, simulated_annealing, nelder_mead")
      ->delimiter(',');
  cmd->add_flag("--polish", o.polish, "run corr with the Nelder-Mead polish (corr_hybrid)");
  cmd->add_option("--workers", o.workers, "worker threads (0: all cores)");
  cmd->add_option("--grid", o.grid, "mu grid points");
  cmd->add_flag("--quiet,-q", o.quiet, "no per-trial progress lines");
}

void print_summary(const corr::bench::RunReport& report) {
  for (const auto& row : report.aggregate) {
    fmt::print("{:<18} n={:<3} T={:<7} {:<20} mean {:.3e}  median {:.3e}  ({} trials)\n",
               row.function, row.dim, row.T, row.method, row.mean, row.median, row.trials);
  }
  fmt::print("results: {}\n", report.run_dir.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CoRR benchmark runner"};
  app.require_subcommand(1);

  struct Entry {
    Experiment experiment;
    const char* name;
    const char* help;
  };
  const std::vector<Entry> entries = {
      {Experiment::optimize, "optimize", "run CoRR (or a baseline) on one function"},
      {Experiment::sweep, "sweep", "error against T for each function"},
      {Experiment::scale, "scale", "error over a dimension x T grid"},
      {Experiment::compare, "compare", "CoRR against baselines at matched budgets"},
      {Experiment::mu_trace, "mu-trace", "mu profile and fitted surrogates"},
  };
  std::vector<Overrides> overrides(entries.size());
  std::vector<CLI::App*> commands;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    CLI::App* cmd = app.add_subcommand(entries[i].name, entries[i].help);
    add_options(cmd, overrides[i]);
    commands.push_back(cmd);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (!commands[i]->parsed()) continue;
      const Overrides& o = overrides[i];
      const ExperimentConfig cfg = build_config(entries[i].experiment, o);
      corr::bench::ProgressFn progress;
      if (!o.quiet) {
        progress = [](const corr::bench::TrialRecord& r) {
          fmt::print(stderr, "{} n={} T={} {} trial {}: error {:.3e} ({:.0f} ms)\n", r.function,
                     r.dim, r.T, r.method, r.trial_index, r.error, r.wall_ms);
        };
      }
      print_summary(corr::bench::run_experiment(cfg, progress));
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
