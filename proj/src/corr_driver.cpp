#include "corr/corr_driver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace corr {

namespace {

constexpr double kGolden = 0.6180339887498949;  // (sqrt(5) - 1) / 2

class MuSearch {
 public:
  MuSearch(const Objective& fn, const EnvelopeRegression& regression, const CorrConfig& cfg,
           MuSearchResult& out)
      : fn_(fn), regression_(regression), cfg_(cfg), out_(out) {}

  double probe(double mu, bool refinement) {
    // Consecutive probes are close in mu, so the previous vertex is reused.
    OptOutcome outcome = opt_procedure(mu, regression_, cfg_, fn_.domain_radius(),
                                       last_basis_.rows.empty() ? nullptr : &last_basis_);
    last_basis_ = outcome.fit.basis;
    const double g = fn_.evaluate(outcome.x);
    out_.profile.push_back({mu, g, refinement});
    const bool better = !has_best_ || g < out_.f_hat || (g == out_.f_hat && mu < out_.mu_hat);
    if (better) {
      has_best_ = true;
      out_.mu_hat = mu;
      out_.f_hat = g;
      out_.x_hat = std::move(outcome.x);
      out_.fit_hat = std::move(outcome.fit);
    }
    if (refinement) out_.incumbent.push_back(out_.f_hat);
    return g;
  }

 private:
  const Objective& fn_;
  const EnvelopeRegression& regression_;
  const CorrConfig& cfg_;
  MuSearchResult& out_;
  bool has_best_ = false;
  LadBasis last_basis_;
};

MuSearchResult run_search(const Objective& fn, const SamplePair& samples,
                          const EnvelopeRegression& regression, const CorrConfig& cfg) {
  MuSearchResult out;
  out.R_hat = estimate_R(samples, cfg.r_override);
  const double R = out.R_hat;
  const int G = cfg.mu_grid_points;
  MuSearch search(fn, regression, cfg, out);

  std::vector<double> grid(static_cast<std::size_t>(G));
  std::vector<double> values(static_cast<std::size_t>(G));
  for (int i = 0; i < G; ++i) {
    grid[static_cast<std::size_t>(i)] = -R + 2.0 * R * static_cast<double>(i) / (G - 1);
  }
  int best = 0;
  for (int i = 0; i < G; ++i) {
    values[static_cast<std::size_t>(i)] = search.probe(grid[static_cast<std::size_t>(i)], false);
    if (values[static_cast<std::size_t>(i)] < values[static_cast<std::size_t>(best)]) best = i;
  }
  out.best_grid_index = best;

  double a = grid[static_cast<std::size_t>(std::max(best - 1, 0))];
  double b = grid[static_cast<std::size_t>(std::min(best + 1, G - 1))];
  out.bracket_lo = a;
  out.bracket_hi = b;

  int remaining = cfg.refine_iters;
  if (remaining <= 0) return out;
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double gc = search.probe(c, true);
  if (--remaining == 0) return out;
  double gd = search.probe(d, true);
  --remaining;
  for (; remaining > 0; --remaining) {
    if (gc <= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - kGolden * (b - a);
      gc = search.probe(c, true);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + kGolden * (b - a);
      gd = search.probe(d, true);
    }
  }
  return out;
}

}  // namespace

void CorrConfig::validate() const {
  if (T < 1) throw std::invalid_argument("T must be >= 1");
  if (mu_grid_points < 3) throw std::invalid_argument("mu_grid_points must be >= 3");
  if (refine_iters < 1) throw std::invalid_argument("refine_iters must be >= 1");
  if (!(box_bound > 0.0)) throw std::invalid_argument("box_bound must be positive");
  if (!(lp_tol > 0.0)) throw std::invalid_argument("lp_tol must be positive");
  if (!(ball_tol > 0.0)) throw std::invalid_argument("ball_tol must be positive");
  if (polish_budget < 0) throw std::invalid_argument("polish_budget must be >= 0");
  if (r_override && !(*r_override >= 0.0 && std::isfinite(*r_override))) {
    throw std::invalid_argument("r_override must be finite and non-negative");
  }
}

SamplePair draw_samples(const Objective& fn, std::size_t T, std::uint64_t seed) {
  return {draw_sample_set(fn, T, seed, SetId::one), draw_sample_set(fn, T, seed, SetId::two)};
}

OptOutcome opt_procedure(double mu, const EnvelopeRegression& regression, const CorrConfig& cfg,
                         double radius, const LadBasis* warm) {
  OptOutcome out;
  out.fit = regression.fit(mu, cfg.box_bound, cfg.lp_tol, warm);
  out.x = minimize_on_ball(out.fit.theta, radius, cfg.ball_tol);
  return out;
}

OptOutcome opt_procedure(double mu, const SamplePair& samples, const CorrConfig& cfg,
                         double radius) {
  const EnvelopeRegression regression(samples.fit, samples.mean);
  return opt_procedure(mu, regression, cfg, radius);
}

double estimate_R(const SamplePair& samples, std::optional<double> r_override) {
  if (r_override) return *r_override;
  if (samples.fit.values.size() == 0 && samples.mean.values.size() == 0) {
    throw std::invalid_argument("cannot estimate R from empty samples");
  }
  double r = 0.0;
  if (samples.fit.values.size() > 0) r = samples.fit.values.cwiseAbs().maxCoeff();
  if (samples.mean.values.size() > 0) r = std::max(r, samples.mean.values.cwiseAbs().maxCoeff());
  return r;
}

MuSearchResult search_mu(const Objective& fn, const SamplePair& samples,
                         const CorrConfig& cfg) {
  cfg.validate();
  const EnvelopeRegression regression(samples.fit, samples.mean);
  return run_search(fn, samples, regression, cfg);
}

LocalSearchResult polish(const Objective& fn, const Point& x0, std::int64_t budget,
                         std::optional<double> f0) {
  const std::function<double(const Point&)> objective = [&fn](const Point& x) {
    return fn.evaluate(x);
  };
  return nelder_mead_minimize(objective, x0, f0, budget, fn.domain_radius());
}

CorrResult corr_optimize(const Objective& fn, const CorrConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  const SamplePair samples = draw_samples(fn, cfg.T, cfg.seed);
  const EnvelopeRegression regression(samples.fit, samples.mean);
  MuSearchResult search = run_search(fn, samples, regression, cfg);

  CorrResult result;
  result.x_hat = std::move(search.x_hat);
  result.f_hat = search.f_hat;
  result.f_before_polish = search.f_hat;
  result.mu_hat = search.mu_hat;
  result.theta_hat = std::move(search.fit_hat.theta);
  result.R_hat = search.R_hat;
  result.profile = std::move(search.profile);
  result.eval_count =
      2 * static_cast<std::int64_t>(cfg.T) + static_cast<std::int64_t>(result.profile.size());

  if (cfg.polish) {
    const LocalSearchResult local = polish(fn, result.x_hat, cfg.polish_budget, result.f_hat);
    result.polish_evals = local.evaluations;
    result.eval_count += local.evaluations;
    if (local.f < result.f_hat) {
      result.x_hat = local.x;
      result.f_hat = local.f;
    }
  }

  result.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace corr
