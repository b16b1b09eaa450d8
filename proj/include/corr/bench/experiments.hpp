#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "corr/bench/config.hpp"
#include "corr/bench/records.hpp"
#include "corr/types.hpp"

namespace corr::bench {

inline constexpr int kArtifactVersion = 1;

struct TrialOutcome {
  TrialRecord record;
  Point x_hat;
};

// Called from worker threads, one call at a time, in completion order.
using ProgressFn = std::function<void(const TrialRecord&)>;

// Evaluations granted to the baselines in a T-sample cell: what CoRR with
// polish may spend, 2T + probes + polish budget.
std::int64_t matched_budget(const CorrConfig& corr, std::size_t T);

// One trial; every random choice derives from the record's seed. `corr` is
// taken from the config apart from T, seed and polish (set by the method).
TrialOutcome run_trial(FunctionName function, int dim, std::size_t T, int trial_index,
                       Method method, const ExperimentConfig& cfg);

// The full task grid functions x dims x t_values x methods x trials, run on
// the worker pool. The result order is the grid order, whatever the
// scheduling.
std::vector<TrialOutcome> run_trials(const ExperimentConfig& cfg, const ProgressFn& progress = {});

struct RunReport {
  std::filesystem::path run_dir;
  std::vector<TrialRecord> trials;
  std::vector<AggregateRow> aggregate;
  std::vector<std::string> artifacts;  // file names inside run_dir
};

// Each writes out_dir/run_<utc timestamp>_<config hash>/ with config.json,
// trials.csv, aggregate.csv, the experiment's extra tables and charts, and
// manifest.json. They throw std::invalid_argument when cfg.experiment does
// not match.
RunReport run_optimize(const ExperimentConfig& cfg, const ProgressFn& progress = {});
RunReport run_sweep(const ExperimentConfig& cfg, const ProgressFn& progress = {});
RunReport run_scale(const ExperimentConfig& cfg, const ProgressFn& progress = {});
RunReport run_compare(const ExperimentConfig& cfg, const ProgressFn& progress = {});
RunReport run_mu_trace(const ExperimentConfig& cfg, const ProgressFn& progress = {});

RunReport run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress = {});

// Charts rebuilt from the CSV files of a finished run (the sweep, scale and
// compare charts need only aggregate.csv). Returns the written file names.
std::vector<std::string> render_charts(const std::filesystem::path& run_dir, Experiment experiment);

}  // namespace corr::bench
