// Acceptance suite: one PASS/FAIL line per criterion.
//
//   corr_acceptance            all criteria
//   corr_acceptance 2 9        selected criteria
//
// Exit status is non-zero when any selected criterion fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "corr/bench/experiments.hpp"
#include "corr/corr_driver.hpp"
#include "oracles.hpp"

#ifndef CORR_FIXTURE_DIR
#error "CORR_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace fs = std::filesystem;
using corr::FunctionName;
using corr::Method;
using corr::bench::ExperimentConfig;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<double> errors_of(const std::vector<corr::bench::TrialOutcome>& trials) {
  std::vector<double> e;
  for (const auto& t : trials) e.push_back(t.record.error);
  return e;
}

ExperimentConfig trials_config(FunctionName fn, std::vector<int> dims, std::size_t T, Method m) {
  ExperimentConfig cfg;
  cfg.experiment = corr::bench::Experiment::optimize;
  cfg.functions = {fn};
  cfg.dims = std::move(dims);
  cfg.t_values = {T};
  cfg.methods = {m};
  cfg.trials = 20;
  return cfg;
}

Outcome analytic_optima() {
  double worst = 0.0;
  for (FunctionName name : corr::kAllFunctions) {
    for (int dim : {1, 2, 3, 5, 10, 50}) {
      const corr::TestFunction fn(name, dim);
      worst = std::max(worst, std::abs(fn.evaluate(fn.x_star()) - fn.f_star()));
    }
  }
  // the Langerman minimizer sits at the rescaled centre 0.5 * ones
  const corr::TestFunction l(FunctionName::langerman, 4);
  const bool centred = (l.x_star() - corr::Point::Constant(4, 0.5 / 2.5)).norm() < 1e-15;
  return {worst <= 1e-12 && centred, fmt::format("max |f(x*) - f*| = {:.1e}", worst)};
}

Outcome lp_oracle() {
  std::mt19937_64 gen(20240607);
  std::uniform_real_distribution<double> u(0, 1);
  double worst_gap = 0.0, worst_resid = 0.0;
  int bad = 0;
  for (int k = 0; k < 200; ++k) {
    const int n = 1 + static_cast<int>(u(gen) * 2);
    const int T = 1 + static_cast<int>(u(gen) * 6);
    const int T2 = 1 + static_cast<int>(u(gen) * 6);
    const FunctionName name = corr::kAllFunctions[static_cast<std::size_t>(u(gen) * 5)];
    const auto fn = corr::make_function(name, n);
    const std::uint64_t seed = gen();
    const auto fit_set = corr::draw_sample_set(fn, T, seed, corr::SetId::one);
    const auto mean_set = corr::draw_sample_set(fn, T2, seed, corr::SetId::two);
    const double mu = -0.5 + 3.5 * u(gen);
    const double box = u(gen) < 0.3 ? 4.0 + 6.0 * u(gen) : 1e6;
    const auto r = corr::fit_envelope(corr::FitProblem{fit_set, mean_set, mu, box});

    Eigen::MatrixXd phi(T, 2 * n + 1);
    for (int i = 0; i < T; ++i)
      phi.row(i) = oracle::quad_features(fit_set.points.row(i).transpose()).transpose();
    Eigen::VectorXd m = Eigen::VectorXd::Zero(2 * n + 1);
    for (int i = 0; i < T2; ++i) m += oracle::quad_features(mean_set.points.row(i).transpose());
    m /= T2;
    const auto ref = oracle::lad_vertex_enumeration(phi, fit_set.values, m, mu, n, box);

    const Eigen::VectorXd theta = r.theta.flat();
    double resid = std::abs(m.dot(theta) - mu);
    resid = std::max(resid, -theta.head(n).minCoeff());
    resid = std::max(resid, theta.cwiseAbs().maxCoeff() - box);
    const double gap = std::abs(r.objective - ref.objective);
    worst_gap = std::max(worst_gap, gap);
    worst_resid = std::max(worst_resid, resid);
    if (gap > 1e-6 || resid > 1e-8 || r.status != corr::FitStatus::optimal) ++bad;
  }
  return {bad == 0, fmt::format("200 fits, max objective gap {:.1e}, max constraint residual {:.1e}",
                                worst_gap, worst_resid)};
}

Outcome ball_oracle() {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(0, 1);
  double worst_above = -1e300, worst_below = 0.0;
  int bad = 0;
  for (int k = 0; k < 200; ++k) {
    const int n = 1 + static_cast<int>(u(gen) * 3);
    corr::QuadSurrogate s = corr::QuadSurrogate::zero(n);
    for (int i = 0; i < n; ++i) {
      s.theta1[i] = u(gen) < 0.25 ? 0.0 : 5.0 * u(gen);
      s.theta2[i] = 24.0 * u(gen) - 12.0;
    }
    s.theta3 = 2.0 * u(gen) - 1.0;
    const corr::Point x = corr::minimize_on_ball(s, 2.0);
    const double v = corr::h_eval(s, x);
    const double ref = oracle::ball_min(s.theta1, s.theta2, s.theta3, 2.0);
    worst_above = std::max(worst_above, v - ref);
    worst_below = std::max(worst_below, ref - v);
    if (v > ref + 1e-4 || v < ref - 1e-8 || x.norm() > 2.0 * (1 + 1e-12)) ++bad;
  }
  return {bad == 0, fmt::format("200 cases, value - oracle in [{:.1e}, {:.1e}]", -worst_below,
                                worst_above)};
}

Outcome planted_model() {
  double worst = 0.0;
  for (int n : {1, 3}) {
    for (int trial = 0; trial < 20; ++trial) {
      corr::Rng rng(corr::derive_seed(7000 + n, trial));
      Eigen::VectorXd a(n);
      for (int i = 0; i < n; ++i) a[i] = 0.2 + 4.8 * rng.uniform();
      const corr::DiagonalQuadratic q(a, rng.ball_point(n, 1.9));
      corr::CorrConfig cfg;
      cfg.T = 500;
      cfg.seed = corr::bench::trial_seed(0, n, 500, trial, "corr");
      const auto res = corr::corr_optimize(q, cfg);
      worst = std::max(worst, res.f_hat - q.f_star());
    }
  }
  return {worst < 1e-6, fmt::format("worst error over 40 trials {:.2e}", worst)};
}

Outcome langerman_1d() {
  const auto cfg = trials_config(FunctionName::langerman, {1}, 200, Method::corr);
  const double med = oracle::median(errors_of(corr::bench::run_trials(cfg)));
  return {med < 1e-2, fmt::format("median error {:.3e} (T = 200, 20 seeds)", med)};
}

Outcome salomon_scaling() {
  const fs::path dir = fs::path(CORR_FIXTURE_DIR) / "salomon_scale";
  const ExperimentConfig cfg = corr::bench::load_config(dir / "config.json");
  std::ifstream in(dir / "aggregate.csv");
  const auto fixture = corr::bench::read_aggregate_csv(in);
  const auto live = corr::bench::aggregate([&] {
    std::vector<corr::bench::TrialRecord> recs;
    for (auto& t : corr::bench::run_trials(cfg)) recs.push_back(t.record);
    return recs;
  }());

  std::map<std::pair<int, std::size_t>, double> mean;
  for (const auto& row : live) mean[{row.dim, row.T}] = row.mean;
  bool ok = live.size() == fixture.size() && !live.empty();
  double drift = 0.0;
  for (std::size_t i = 0; ok && i < live.size(); ++i) {
    ok = live[i].dim == fixture[i].dim && live[i].T == fixture[i].T;
    drift = std::max(drift, std::abs(live[i].mean - fixture[i].mean) /
                                std::max(1e-300, std::abs(fixture[i].mean)));
  }
  bool monotone = true;
  for (int dim : cfg.dims) {
    for (std::size_t k = 1; k < cfg.t_values.size(); ++k) {
      monotone = monotone && mean[{dim, cfg.t_values[k]}] <= mean[{dim, cfg.t_values[k - 1]}];
    }
  }
  const double d2 = mean[{2, 100000}];
  std::string cells;
  for (int dim : cfg.dims) {
    cells += fmt::format(" n={}:", dim);
    for (std::size_t T : cfg.t_values) cells += fmt::format(" {:.1e}", mean[{dim, T}]);
  }
  return {ok && drift <= 1e-6 && monotone && d2 < 0.05,
          fmt::format("mean error by T{}; fixture drift {:.1e}", cells, drift)};
}

Outcome high_dimension() {
  // the good mu window is narrow in 10D: 33 grid points miss it at this T
  ExperimentConfig cfg = trials_config(FunctionName::salomon, {10}, 100000, Method::corr);
  cfg.methods = {Method::corr, Method::nelder_mead};
  cfg.corr.mu_grid_points = 65;
  const std::int64_t granted = corr::bench::matched_budget(cfg.corr, 100000);
  std::vector<double> corr_err, nm_err;
  std::int64_t corr_evals = 0, nm_evals = 0;
  for (const auto& t : corr::bench::run_trials(cfg)) {
    if (t.record.method == "corr") {
      corr_err.push_back(t.record.error);
      corr_evals = std::max(corr_evals, t.record.eval_count);
    } else {
      nm_err.push_back(t.record.error);
      nm_evals = std::max(nm_evals, t.record.eval_count);
    }
  }
  // Nelder-Mead may stop early once its simplex collapses; what is matched is
  // the allowance, and it never exceeds it
  const double mc = oracle::median(corr_err), mn = oracle::median(nm_err);
  return {mn > mc && granted >= corr_evals && nm_evals <= granted,
          fmt::format("dim 10: nelder_mead median {:.3e} vs corr median {:.3e}; budget {} "
                      "(corr used {}, nelder_mead at most {})",
                      mn, mc, granted, corr_evals, nm_evals)};
}

Outcome hybrid_polish() {
  bool ok = true;
  std::string detail;
  for (int dim : {1, 3, 5}) {
    const auto cfg = trials_config(FunctionName::salomon, {dim}, 5000, Method::corr_hybrid);
    int hits = 0;
    for (double e : errors_of(corr::bench::run_trials(cfg))) hits += e < 1e-8;
    ok = ok && hits >= 18;
    detail += fmt::format("{}dim {}: {}/20", detail.empty() ? "" : ", ", dim, hits);
  }
  return {ok, detail + " below 1e-8"};
}

Outcome mu_profile() {
  const auto fn = corr::make_function(FunctionName::salomon_sq, 1);
  corr::CorrConfig cfg;
  cfg.T = 2000;
  cfg.seed = corr::bench::trial_seed(0, 1, 2000, 0, "corr");
  const auto samples = corr::draw_samples(fn, cfg.T, cfg.seed);
  const auto search = corr::search_mu(fn, samples, cfg);
  int grid = 0, good = 0;
  for (const auto& p : search.profile) {
    if (p.refinement) continue;
    ++grid;
    good += p.f_value - fn.f_star() < 0.1;
  }
  const double R = search.R_hat;
  const bool interior = search.mu_hat > -R && search.mu_hat < R && search.best_grid_index > 0 &&
                        search.best_grid_index < cfg.mu_grid_points - 1;
  return {4 * good >= grid && interior,
          fmt::format("{}/{} grid points within 0.1; minimum at mu = {:.4f} in [-{:.4f}, {:.4f}]",
                      good, grid, search.mu_hat, R, R)};
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "corr_acceptance_rerun";
  fs::remove_all(root);
  ExperimentConfig cfg;
  cfg.experiment = corr::bench::Experiment::compare;
  cfg.functions = {FunctionName::salomon, FunctionName::langerman};
  cfg.dims = {1, 3};
  cfg.t_values = {200};
  cfg.trials = 3;
  cfg.methods = {Method::corr, Method::corr_hybrid, Method::random_search,
                 Method::simulated_annealing, Method::nelder_mead};
  cfg.output_dir = root;
  cfg.workers = 3;
  const auto a = corr::bench::run_experiment(cfg);
  cfg.workers = 1;
  const auto b = corr::bench::run_experiment(cfg);

  auto strip = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::string out, line;
    std::size_t col = std::string::npos;
    while (std::getline(in, line)) {
      auto fields = corr::bench::split_csv_line(line);
      if (col == std::string::npos) {
        col = static_cast<std::size_t>(std::find(fields.begin(), fields.end(), "wall_ms") -
                                       fields.begin());
      }
      fields.erase(fields.begin() + static_cast<std::ptrdiff_t>(col));
      for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + fields[i];
      out += '\n';
    }
    return out;
  };
  const std::string ta = strip(a.run_dir / "trials.csv");
  const std::string tb = strip(b.run_dir / "trials.csv");
  const bool same = !ta.empty() && ta == tb && a.run_dir != b.run_dir;
  fs::remove_all(root);
  return {same, fmt::format("{} trial rows, reruns {}", a.trials.size(),
                            same ? "byte-identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"analytic optima", analytic_optima},
      {"LP oracle equivalence", lp_oracle},
      {"ball-minimizer oracle", ball_oracle},
      {"planted-model recovery", planted_model},
      {"Langerman 1D convergence", langerman_1d},
      {"Salomon scaling", salomon_scaling},
      {"high-dimension comparison", high_dimension},
      {"hybrid polish", hybrid_polish},
      {"mu-profile robustness", mu_profile},
      {"determinism", determinism},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
      return 2;
    }
    selected.push_back(k);
  }
  if (selected.empty())
    for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) selected.push_back(k);

  int failed = 0;
  for (int k : selected) {
    const auto& [name, run] = criteria[static_cast<std::size_t>(k - 1)];
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fmt::print("criterion {:>2} {}: {} ({}, {:.1f} s)\n", k, out.pass ? "PASS" : "FAIL", name,
               out.detail, secs);
    std::fflush(stdout);
    failed += !out.pass;
  }
  return failed == 0 ? 0 : 1;
}
