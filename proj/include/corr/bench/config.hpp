#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "corr/baselines.hpp"
#include "corr/corr_driver.hpp"
#include "corr/testbed.hpp"

namespace corr::bench {

enum class Experiment { optimize, sweep, scale, compare, mu_trace };

std::string_view to_string(Experiment experiment);
// Accepts "mu_trace" and "mu-trace".
Experiment parse_experiment(std::string_view token);

struct ExperimentConfig {
  Experiment experiment = Experiment::optimize;
  std::vector<FunctionName> functions{FunctionName::salomon};
  std::vector<int> dims{1};
  std::vector<std::size_t> t_values{500};
  int trials = 20;
  std::uint64_t base_seed = 0;
  std::vector<Method> methods{Method::corr};
  // Sample size and seed are set per trial; everything else passes through.
  CorrConfig corr;
  // mu_trace: mu values whose surrogate is traced; empty means the grid ends,
  // the midpoint and the selected mu.
  std::vector<double> trace_mu;
  int trace_points = 401;
  // 0 picks the hardware concurrency.
  int workers = 0;
  std::filesystem::path output_dir = "results";

  // Throws std::invalid_argument with a readable message.
  void validate() const;
};

// Parses a JSON document. Missing keys keep their defaults; unknown keys are
// an error so typos do not pass silently.
ExperimentConfig config_from_json(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Canonical JSON (sorted keys, two-space indent). Parsing it back gives an
// equal config.
std::string config_to_json(const ExperimentConfig& cfg);

// First 12 hex digits of a 64-bit FNV-1a hash of the canonical JSON, with
// output_dir and workers left out: neither changes any result.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace corr::bench
