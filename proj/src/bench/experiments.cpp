#include "corr/bench/experiments.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "corr/bench/svg.hpp"
#include "corr/sampler.hpp"
#include "json.hpp"

namespace corr::bench {

namespace fs = std::filesystem;

namespace {

// Stream ids for the random start points of the baselines.
constexpr std::uint64_t kStartStream = 3;

struct Task {
  FunctionName function;
  int dim;
  std::size_t T;
  Method method;
  int trial;
};

Method effective_method(Method m, const CorrConfig& corr) {
  return m == Method::corr && corr.polish ? Method::corr_hybrid : m;
}

std::vector<Task> task_grid(const ExperimentConfig& cfg) {
  std::vector<Task> tasks;
  for (FunctionName f : cfg.functions) {
    for (int d : cfg.dims) {
      for (std::size_t T : cfg.t_values) {
        for (Method m : cfg.methods) {
          for (int k = 0; k < cfg.trials; ++k) {
            tasks.push_back({f, d, T, effective_method(m, cfg.corr), k});
          }
        }
      }
    }
  }
  return tasks;
}

// Runs fn(i) for i in [0, n) on at most `workers` threads and rethrows the
// first failure.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  unsigned threads = workers > 0 ? static_cast<unsigned>(workers)
                                 : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::string utc_stamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

fs::path make_run_dir(const ExperimentConfig& cfg, std::string& stamp) {
  stamp = utc_stamp();
  const std::string base = fmt::format("run_{}_{}", stamp, config_hash(cfg));
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) {
    throw std::runtime_error(
        fmt::format("cannot create output directory '{}': {}", cfg.output_dir.string(), ec.message()));
  }
  for (int k = 0;; ++k) {
    const fs::path dir = cfg.output_dir / (k == 0 ? base : fmt::format("{}_{}", base, k));
    if (fs::create_directory(dir, ec)) return dir;
    if (ec) {
      throw std::runtime_error(
          fmt::format("cannot create run directory '{}': {}", dir.string(), ec.message()));
    }
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw std::runtime_error(fmt::format("write failed for '{}'", path.string()));
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read '{}'", path.string()));
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void require(const ExperimentConfig& cfg, Experiment expected) {
  if (cfg.experiment != expected) {
    throw std::invalid_argument(fmt::format("config is for experiment '{}', not '{}'",
                                            to_string(cfg.experiment), to_string(expected)));
  }
  cfg.validate();
}

// Writes the files every experiment shares; extras are added by the caller
// before the manifest.
struct RunWriter {
  RunReport report;
  std::string stamp;
  const ExperimentConfig& cfg;

  RunWriter(const ExperimentConfig& c, const std::vector<TrialOutcome>& outcomes) : cfg(c) {
    report.run_dir = make_run_dir(cfg, stamp);
    for (const auto& o : outcomes) report.trials.push_back(o.record);
    report.aggregate = aggregate(report.trials);
    add("config.json", config_to_json(cfg));
    std::ostringstream trials;
    write_trials_csv(trials, report.trials);
    add("trials.csv", trials.str());
    std::ostringstream agg;
    write_aggregate_csv(agg, report.aggregate);
    add("aggregate.csv", agg.str());
  }

  void add(const std::string& name, const std::string& text) {
    write_text(report.run_dir / name, text);
    report.artifacts.push_back(name);
  }

  RunReport finish(const std::vector<std::string>& charts) {
    for (const auto& c : charts) report.artifacts.push_back(c);
    nlohmann::json manifest;
    manifest["artifact_version"] = kArtifactVersion;
    manifest["generator_version"] = std::string(kGeneratorVersion);
    manifest["config_hash"] = config_hash(cfg);
    manifest["experiment"] = std::string(to_string(cfg.experiment));
    manifest["created_utc"] = stamp;
    manifest["trial_count"] = report.trials.size();
    manifest["files"] = report.artifacts;
    write_text(report.run_dir / "manifest.json", manifest.dump(2) + "\n");
    report.artifacts.push_back("manifest.json");
    return std::move(report);
  }
};

std::string join_point(const Point& x) {
  std::string s;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += fmt::format("{}{}", i ? " " : "", x[i]);
  return s;
}

std::vector<AggregateRow> read_aggregate_file(const fs::path& path) {
  std::istringstream in(read_text(path));
  return read_aggregate_csv(in);
}

std::string series_label(const AggregateRow& r, bool with_fn, bool with_method, bool with_dim) {
  std::string label;
  const auto part = [&label](const std::string& p) { label += label.empty() ? p : " " + p; };
  if (with_fn) part(r.function);
  if (with_method) part(r.method);
  if (with_dim) part(fmt::format("n={}", r.dim));
  return label.empty() ? r.method : label;
}

template <typename Get>
bool varies(const std::vector<AggregateRow>& rows, Get get) {
  for (const auto& r : rows) {
    if (get(r) != get(rows.front())) return true;
  }
  return false;
}

std::vector<std::string> sweep_charts(const fs::path& dir) {
  const auto rows = read_aggregate_file(dir / "aggregate.csv");
  if (rows.empty()) return {};
  const bool fn = varies(rows, [](const AggregateRow& r) { return r.function; });
  const bool me = varies(rows, [](const AggregateRow& r) { return r.method; });
  const bool di = varies(rows, [](const AggregateRow& r) { return r.dim; });
  LineChart chart{"Mean error vs samples per set", "T", "mean f(x) - f*", true, true, {}};
  std::map<std::string, std::size_t> index;
  for (const auto& r : rows) {
    const std::string label = series_label(r, fn || !me, me, di);
    auto [it, inserted] = index.emplace(label, chart.series.size());
    if (inserted) chart.series.push_back({label, {}, {}});
    chart.series[it->second].x.push_back(static_cast<double>(r.T));
    chart.series[it->second].y.push_back(r.mean);
  }
  write_text(dir / "error_vs_T.svg", render_line_chart(chart));
  return {"error_vs_T.svg"};
}

// dim x T matrix of mean errors for one function and method.
struct ScaleMatrix {
  std::vector<int> dims;
  std::vector<std::size_t> ts;
  std::vector<std::vector<double>> mean;
};

std::map<std::pair<std::string, std::string>, ScaleMatrix> scale_matrices(
    const std::vector<AggregateRow>& rows) {
  std::map<std::pair<std::string, std::string>, ScaleMatrix> out;
  std::map<std::pair<std::string, std::string>, std::map<std::pair<int, std::size_t>, double>> cells;
  for (const auto& r : rows) cells[{r.function, r.method}][{r.dim, r.T}] = r.mean;
  for (const auto& [key, values] : cells) {
    ScaleMatrix m;
    std::set<int> dims;
    std::set<std::size_t> ts;
    for (const auto& [cell, v] : values) {
      dims.insert(cell.first);
      ts.insert(cell.second);
    }
    m.dims.assign(dims.begin(), dims.end());
    m.ts.assign(ts.begin(), ts.end());
    for (int d : m.dims) {
      std::vector<double> row;
      for (std::size_t T : m.ts) {
        const auto it = values.find({d, T});
        row.push_back(it == values.end() ? NAN : it->second);
      }
      m.mean.push_back(std::move(row));
    }
    out.emplace(key, std::move(m));
  }
  return out;
}

std::string scale_matrix_csv(const std::vector<AggregateRow>& rows) {
  std::string s;
  for (const auto& [key, m] : scale_matrices(rows)) {
    s += fmt::format("function,method,dim");
    for (std::size_t T : m.ts) s += fmt::format(",T={}", T);
    s += "\n";
    for (std::size_t r = 0; r < m.dims.size(); ++r) {
      s += fmt::format("{},{},{}", key.first, key.second, m.dims[r]);
      for (double v : m.mean[r]) s += fmt::format(",{}", v);
      s += "\n";
    }
  }
  return s;
}

std::vector<std::string> scale_charts(const fs::path& dir) {
  const auto rows = read_aggregate_file(dir / "aggregate.csv");
  std::vector<std::string> files;
  for (const auto& [key, m] : scale_matrices(rows)) {
    Heatmap map;
    map.title = fmt::format("Mean error, {} ({})", key.first, key.second);
    map.x_label = "T";
    map.y_label = "dimension";
    for (std::size_t T : m.ts) map.x_ticks.push_back(fmt::format("{}", T));
    for (int d : m.dims) map.y_ticks.push_back(fmt::format("{}", d));
    map.values = m.mean;
    const std::string name = fmt::format("scale_{}_{}.svg", key.first, key.second);
    write_text(dir / name, render_heatmap(map));
    files.push_back(name);
  }
  return files;
}

std::string compare_table_csv(const std::vector<AggregateRow>& rows) {
  std::vector<std::string> methods;
  std::map<std::tuple<std::string, int, std::size_t>, std::map<std::string, double>> table;
  std::vector<std::tuple<std::string, int, std::size_t>> order;
  for (const auto& r : rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
    const auto key = std::make_tuple(r.function, r.dim, r.T);
    if (!table.count(key)) order.push_back(key);
    table[key][r.method] = r.median;
  }
  std::string s = "function,dim,T";
  for (const auto& m : methods) s += "," + m;
  s += "\n";
  for (const auto& key : order) {
    s += fmt::format("{},{},{}", std::get<0>(key), std::get<1>(key), std::get<2>(key));
    for (const auto& m : methods) {
      const auto& cells = table[key];
      const auto it = cells.find(m);
      s += it == cells.end() ? std::string(",") : fmt::format(",{}", it->second);
    }
    s += "\n";
  }
  return s;
}

std::vector<std::string> compare_charts(const fs::path& dir) {
  const auto rows = read_aggregate_file(dir / "aggregate.csv");
  if (rows.empty()) return {};
  const bool fn = varies(rows, [](const AggregateRow& r) { return r.function; });
  const bool tv = varies(rows, [](const AggregateRow& r) { return r.T; });
  LineChart chart{"Median error vs dimension (matched budgets)", "dimension",
                  "median f(x) - f*", false, true, {}};
  std::map<std::string, std::size_t> index;
  for (const auto& r : rows) {
    std::string label = fn ? r.function + " " + r.method : r.method;
    if (tv) label += fmt::format(" T={}", r.T);
    auto [it, inserted] = index.emplace(label, chart.series.size());
    if (inserted) chart.series.push_back({label, {}, {}});
    chart.series[it->second].x.push_back(r.dim);
    chart.series[it->second].y.push_back(r.median);
  }
  write_text(dir / "compare.svg", render_line_chart(chart));
  return {"compare.svg"};
}

std::vector<std::string> mu_trace_charts(const fs::path& dir) {
  std::vector<std::string> files;
  {
    std::istringstream in(read_text(dir / "profile.csv"));
    std::string line;
    std::getline(in, line);
    LineChart chart{"mu profile: f(x_mu) - f*", "mu", "f(x_mu) - f*", false, true, {}};
    std::map<std::string, std::size_t> index;
    std::vector<std::pair<double, double>> points;
    while (std::getline(in, line)) {
      const auto f = split_csv_line(line);
      if (f.size() != 10) continue;
      // Trial 0 of each cell, grid probes only, so the curve reads left to right.
      if (f[3] != "0" || f[9] != "grid") continue;
      const std::string label = fmt::format("{} n={} T={}", f[0], f[1], f[2]);
      auto [it, inserted] = index.emplace(label, chart.series.size());
      if (inserted) chart.series.push_back({label, {}, {}});
      chart.series[it->second].x.push_back(std::stod(f[6]));
      chart.series[it->second].y.push_back(std::stod(f[8]));
    }
    write_text(dir / "mu_profile.svg", render_line_chart(chart));
    files.push_back("mu_profile.svg");
  }
  {
    std::istringstream in(read_text(dir / "trace.csv"));
    std::string line;
    std::getline(in, line);
    LineChart chart{"Fitted surrogates against f (trial 0)", "x_1", "value", false, false, {}};
    std::map<std::string, std::size_t> index;
    std::string first_cell;
    while (std::getline(in, line)) {
      const auto f = split_csv_line(line);
      if (f.size() != 8 || f[3] != "0") continue;
      const std::string cell = f[0] + "/" + f[1] + "/" + f[2];
      if (first_cell.empty()) first_cell = cell;
      if (cell != first_cell) continue;
      const double x = std::stod(f[5]);
      const std::string h_label = fmt::format("h, mu={:.4g}", std::stod(f[4]));
      for (const auto& [label, value] : {std::pair{std::string("f"), f[7]}, {h_label, f[6]}}) {
        auto [it, inserted] = index.emplace(label, chart.series.size());
        if (inserted) chart.series.push_back({label, {}, {}});
        // f repeats for every mu; keep its first pass only.
        auto& s = chart.series[it->second];
        if (label == "f" && !s.x.empty() && x <= s.x.back()) continue;
        s.x.push_back(x);
        s.y.push_back(std::stod(value));
      }
    }
    write_text(dir / "surrogate_trace.svg", render_line_chart(chart));
    files.push_back("surrogate_trace.svg");
  }
  return files;
}

RunReport run_grid_experiment(const ExperimentConfig& cfg, const ProgressFn& progress) {
  const auto outcomes = run_trials(cfg, progress);
  RunWriter writer(cfg, outcomes);
  switch (cfg.experiment) {
    case Experiment::optimize: {
      std::string s = "function,dim,T,trial_index,method,x_hat\n";
      for (const auto& o : outcomes) {
        const auto& r = o.record;
        s += fmt::format("{},{},{},{},{},{}\n", r.function, r.dim, r.T, r.trial_index, r.method,
                         join_point(o.x_hat));
      }
      writer.add("solutions.csv", s);
      break;
    }
    case Experiment::scale:
      writer.add("scale_matrix.csv", scale_matrix_csv(writer.report.aggregate));
      break;
    case Experiment::compare:
      writer.add("compare_table.csv", compare_table_csv(writer.report.aggregate));
      break;
    default:
      break;
  }
  return writer.finish(render_charts(writer.report.run_dir, cfg.experiment));
}

}  // namespace

std::int64_t matched_budget(const CorrConfig& corr, std::size_t T) {
  return 2 * static_cast<std::int64_t>(T) + corr.probe_count() + corr.polish_budget;
}

TrialOutcome run_trial(FunctionName function, int dim, std::size_t T, int trial_index,
                       Method method, const ExperimentConfig& cfg) {
  const TestFunction fn = make_function(function, dim);
  TrialOutcome out;
  TrialRecord& r = out.record;
  r.function = std::string(to_string(function));
  r.dim = dim;
  r.T = T;
  r.trial_index = trial_index;
  r.method = std::string(to_string(method));
  r.seed = trial_seed(cfg.base_seed, dim, T, trial_index, r.method);
  r.generator_version = std::string(kGeneratorVersion);

  const auto start = std::chrono::steady_clock::now();
  const std::int64_t budget = matched_budget(cfg.corr, T);
  switch (method) {
    case Method::corr:
    case Method::corr_hybrid: {
      CorrConfig c = cfg.corr;
      c.T = T;
      c.seed = r.seed;
      c.polish = method == Method::corr_hybrid;
      CorrResult res = corr_optimize(fn, c);
      r.mu_hat = res.mu_hat;
      r.f_hat = res.f_hat;
      r.eval_count = res.eval_count;
      out.x_hat = std::move(res.x_hat);
      break;
    }
    case Method::random_search:
    case Method::simulated_annealing:
    case Method::nelder_mead: {
      BaselineResult res;
      if (method == Method::random_search) {
        res = random_search(fn, budget, r.seed);
      } else if (method == Method::simulated_annealing) {
        res = simulated_annealing(fn, budget, r.seed);
      } else {
        Rng rng(derive_seed(r.seed, kStartStream));
        res = nelder_mead(fn, rng.ball_point(dim, fn.domain_radius()), budget);
      }
      r.f_hat = res.f_best;
      r.eval_count = res.eval_count;
      out.x_hat = std::move(res.x_best);
      break;
    }
  }
  r.error = r.f_hat - fn.f_star();
  r.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<TrialOutcome> run_trials(const ExperimentConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  const auto tasks = task_grid(cfg);
  std::vector<TrialOutcome> out(tasks.size());
  std::mutex progress_mutex;
  parallel_for(tasks.size(), cfg.workers, [&](std::size_t i) {
    const Task& t = tasks[i];
    out[i] = run_trial(t.function, t.dim, t.T, t.trial, t.method, cfg);
    if (progress) {
      std::lock_guard<std::mutex> lock(progress_mutex);
      progress(out[i].record);
    }
  });
  return out;
}

RunReport run_optimize(const ExperimentConfig& cfg, const ProgressFn& progress) {
  require(cfg, Experiment::optimize);
  return run_grid_experiment(cfg, progress);
}

RunReport run_sweep(const ExperimentConfig& cfg, const ProgressFn& progress) {
  require(cfg, Experiment::sweep);
  return run_grid_experiment(cfg, progress);
}

RunReport run_scale(const ExperimentConfig& cfg, const ProgressFn& progress) {
  require(cfg, Experiment::scale);
  return run_grid_experiment(cfg, progress);
}

RunReport run_compare(const ExperimentConfig& cfg, const ProgressFn& progress) {
  require(cfg, Experiment::compare);
  return run_grid_experiment(cfg, progress);
}

RunReport run_mu_trace(const ExperimentConfig& cfg, const ProgressFn& progress) {
  require(cfg, Experiment::mu_trace);

  struct Cell {
    FunctionName function;
    int dim;
    std::size_t T;
    int trial;
  };
  std::vector<Cell> cells;
  for (FunctionName f : cfg.functions) {
    for (int d : cfg.dims) {
      for (std::size_t T : cfg.t_values) {
        for (int k = 0; k < cfg.trials; ++k) cells.push_back({f, d, T, k});
      }
    }
  }

  struct CellOutput {
    TrialOutcome outcome;
    std::string profile;
    std::string trace;
  };
  std::vector<CellOutput> results(cells.size());
  std::mutex progress_mutex;
  parallel_for(cells.size(), cfg.workers, [&](std::size_t i) {
    const Cell& cell = cells[i];
    const TestFunction fn = make_function(cell.function, cell.dim);
    const auto start = std::chrono::steady_clock::now();
    TrialRecord r;
    r.function = std::string(to_string(cell.function));
    r.dim = cell.dim;
    r.T = cell.T;
    r.trial_index = cell.trial;
    r.method = std::string(to_string(Method::corr));
    r.seed = trial_seed(cfg.base_seed, cell.dim, cell.T, cell.trial, r.method);
    r.generator_version = std::string(kGeneratorVersion);

    CorrConfig c = cfg.corr;
    c.T = cell.T;
    c.seed = r.seed;
    c.polish = false;
    const SamplePair samples = draw_samples(fn, c.T, c.seed);
    const MuSearchResult search = search_mu(fn, samples, c);
    r.mu_hat = search.mu_hat;
    r.f_hat = search.f_hat;
    r.error = search.f_hat - fn.f_star();
    r.eval_count = 2 * static_cast<std::int64_t>(c.T) + static_cast<std::int64_t>(search.profile.size());

    CellOutput& out = results[i];
    for (std::size_t k = 0; k < search.profile.size(); ++k) {
      const ProfilePoint& p = search.profile[k];
      out.profile += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.function, r.dim, r.T,
                                 r.trial_index, r.seed, k, p.mu, p.f_value, p.f_value - fn.f_star(),
                                 p.refinement ? "refine" : "grid");
    }

    std::vector<double> mus = cfg.trace_mu;
    if (mus.empty()) {
      const double R = search.R_hat;
      mus = {-R, 0.0, R, search.mu_hat};
    }
    const EnvelopeRegression regression(samples.fit, samples.mean);
    const double radius = fn.domain_radius();
    for (double mu : mus) {
      const FitResult fit = regression.fit(mu, c.box_bound, c.lp_tol);
      for (int j = 0; j < cfg.trace_points; ++j) {
        const double x1 = -radius + 2.0 * radius * j / (cfg.trace_points - 1);
        Point x = Point::Zero(cell.dim);
        x[0] = x1;
        out.trace += fmt::format("{},{},{},{},{},{},{},{}\n", r.function, r.dim, r.T,
                                 r.trial_index, mu, x1, h_eval(fit.theta, x), fn.evaluate(x));
      }
    }
    out.outcome.x_hat = search.x_hat;
    r.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    out.outcome.record = std::move(r);
    if (progress) {
      std::lock_guard<std::mutex> lock(progress_mutex);
      progress(out.outcome.record);
    }
  });

  std::vector<TrialOutcome> outcomes;
  std::string profile = "function,dim,T,trial_index,seed,probe,mu,f_mu,error,phase\n";
  std::string trace = "function,dim,T,trial_index,mu,x1,h,f\n";
  for (auto& c : results) {
    outcomes.push_back(std::move(c.outcome));
    profile += c.profile;
    trace += c.trace;
  }
  RunWriter writer(cfg, outcomes);
  writer.add("profile.csv", profile);
  writer.add("trace.csv", trace);
  return writer.finish(render_charts(writer.report.run_dir, cfg.experiment));
}

RunReport run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress) {
  switch (cfg.experiment) {
    case Experiment::optimize:
      return run_optimize(cfg, progress);
    case Experiment::sweep:
      return run_sweep(cfg, progress);
    case Experiment::scale:
      return run_scale(cfg, progress);
    case Experiment::compare:
      return run_compare(cfg, progress);
    case Experiment::mu_trace:
      return run_mu_trace(cfg, progress);
  }
  throw std::invalid_argument("unknown experiment");
}

std::vector<std::string> render_charts(const fs::path& run_dir, Experiment experiment) {
  switch (experiment) {
    case Experiment::optimize:
      return {};
    case Experiment::sweep:
      return sweep_charts(run_dir);
    case Experiment::scale:
      return scale_charts(run_dir);
    case Experiment::compare:
      return compare_charts(run_dir);
    case Experiment::mu_trace:
      return mu_trace_charts(run_dir);
  }
  return {};
}

}  // namespace corr::bench
