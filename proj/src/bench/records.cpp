#include "corr/bench/records.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

#include "corr/sampler.hpp"

namespace corr::bench {

namespace {

constexpr std::string_view kAggregateColumns =
    "function,dim,T,method,trials,mean,median,q1,q3,min,max";

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h;
}

template <typename T>
T parse_number(std::string_view field, std::string_view column) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw std::runtime_error(fmt::format("bad {} value '{}'", column, field));
  }
  return value;
}

double parse_real(std::string_view field, std::string_view column) {
  if (field == "inf") return INFINITY;
  if (field == "-inf") return -INFINITY;
  if (field == "nan") return NAN;
  return parse_number<double>(field, column);
}

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t base_seed, int dim, std::size_t T, int trial_index,
                         std::string_view method) {
  std::uint64_t h = 1469598103934665603ULL;
  const std::int64_t d = dim;
  const std::uint64_t t = T;
  const std::int64_t k = trial_index;
  h = fnv1a(h, &d, sizeof d);
  h = fnv1a(h, &t, sizeof t);
  h = fnv1a(h, &k, sizeof k);
  h = fnv1a(h, method.data(), method.size());
  return base_seed ^ splitmix64(h);
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      break;
    }
    fields.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << kTrialColumns << '\n';
  for (const auto& r : records) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", r.function, r.dim, r.T,
                       r.trial_index, r.seed, r.method,
                       r.mu_hat ? fmt::format("{}", *r.mu_hat) : std::string(), r.f_hat, r.error,
                       r.eval_count, r.wall_ms, r.generator_version);
  }
}

std::vector<TrialRecord> read_trials_csv(std::istream& in) {
  std::string line;
  if (!next_line(in, line) || line != kTrialColumns) {
    throw std::runtime_error("trials CSV has a missing or unexpected header");
  }
  std::vector<TrialRecord> records;
  while (next_line(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 12) throw std::runtime_error(fmt::format("bad trials row '{}'", line));
    TrialRecord r;
    r.function = f[0];
    r.dim = parse_number<int>(f[1], "dim");
    r.T = parse_number<std::size_t>(f[2], "T");
    r.trial_index = parse_number<int>(f[3], "trial_index");
    r.seed = parse_number<std::uint64_t>(f[4], "seed");
    r.method = f[5];
    if (!f[6].empty()) r.mu_hat = parse_real(f[6], "mu_hat");
    r.f_hat = parse_real(f[7], "f_hat");
    r.error = parse_real(f[8], "error");
    r.eval_count = parse_number<std::int64_t>(f[9], "eval_count");
    r.wall_ms = parse_real(f[10], "wall_ms");
    r.generator_version = f[11];
    records.push_back(std::move(r));
  }
  return records;
}

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level must lie in [0, 1]");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& records) {
  using Key = std::tuple<std::string, int, std::size_t, std::string>;
  std::map<Key, std::size_t> slot;
  std::vector<Key> order;
  std::vector<std::vector<double>> errors;
  for (const auto& r : records) {
    Key key{r.function, r.dim, r.T, r.method};
    auto [it, inserted] = slot.emplace(key, order.size());
    if (inserted) {
      order.push_back(key);
      errors.emplace_back();
    }
    errors[it->second].push_back(r.error);
  }

  std::vector<AggregateRow> rows;
  rows.reserve(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    std::vector<double> e = errors[k];
    // Summation in trial order keeps the mean independent of sorting.
    double sum = 0.0;
    for (double v : e) sum += v;
    std::sort(e.begin(), e.end());
    AggregateRow row;
    std::tie(row.function, row.dim, row.T, row.method) = order[k];
    row.trials = static_cast<int>(e.size());
    row.mean = sum / static_cast<double>(e.size());
    row.median = quantile(e, 0.5);
    row.q1 = quantile(e, 0.25);
    row.q3 = quantile(e, 0.75);
    row.min = e.front();
    row.max = e.back();
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << kAggregateColumns << '\n';
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", r.function, r.dim, r.T, r.method,
                       r.trials, r.mean, r.median, r.q1, r.q3, r.min, r.max);
  }
}

std::vector<AggregateRow> read_aggregate_csv(std::istream& in) {
  std::string line;
  if (!next_line(in, line) || line != kAggregateColumns) {
    throw std::runtime_error("aggregate CSV has a missing or unexpected header");
  }
  std::vector<AggregateRow> rows;
  while (next_line(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 11) throw std::runtime_error(fmt::format("bad aggregate row '{}'", line));
    AggregateRow r;
    r.function = f[0];
    r.dim = parse_number<int>(f[1], "dim");
    r.T = parse_number<std::size_t>(f[2], "T");
    r.method = f[3];
    r.trials = parse_number<int>(f[4], "trials");
    r.mean = parse_real(f[5], "mean");
    r.median = parse_real(f[6], "median");
    r.q1 = parse_real(f[7], "q1");
    r.q3 = parse_real(f[8], "q3");
    r.min = parse_real(f[9], "min");
    r.max = parse_real(f[10], "max");
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace corr::bench
