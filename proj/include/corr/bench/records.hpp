#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace corr::bench {

struct TrialRecord {
  std::string function;
  int dim = 1;
  std::size_t T = 0;
  int trial_index = 0;
  std::uint64_t seed = 0;
  std::string method;
  std::optional<double> mu_hat;  // CoRR methods only
  double f_hat = 0.0;
  double error = 0.0;  // f_hat - f_star
  std::int64_t eval_count = 0;
  double wall_ms = 0.0;
  std::string generator_version;
};

// base_seed XOR a 64-bit hash of (dim, T, trial_index, method).
std::uint64_t trial_seed(std::uint64_t base_seed, int dim, std::size_t T, int trial_index,
                         std::string_view method);

// Header plus one row per record. Reals use the shortest round-trip form, so
// reading the file back gives identical doubles.
void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_trials_csv(std::istream& in);

inline constexpr std::string_view kTrialColumns =
    "function,dim,T,trial_index,seed,method,mu_hat,f_hat,error,eval_count,wall_ms,"
    "generator_version";

struct AggregateRow {
  std::string function;
  int dim = 1;
  std::size_t T = 0;
  std::string method;
  int trials = 0;
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;
};

// Linear-interpolation quantile (Hyndman-Fan type 7) of sorted data.
double quantile(const std::vector<double>& sorted, double q);

// Error statistics per (function, dim, T, method), in order of first
// appearance in `records`.
std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& records);

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);
std::vector<AggregateRow> read_aggregate_csv(std::istream& in);

// Splits one CSV line; fields never contain commas or quotes here.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace corr::bench
