#include "corr/lad_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace corr {

namespace {

using RowKind = LadBasis::Kind;
using ActiveRow = LadBasis::Row;

struct Breakpoint {
  double t;
  double jump;
  Eigen::Index row;
};

constexpr auto kNone = static_cast<std::size_t>(-1);

// Iterations between exact recomputations of the residual vector.
constexpr std::int64_t kRefreshInterval = 16;

// First breakpoint (in order of t) at which the accumulated slope increase
// reaches `need`; kNone if the total never gets there. The answer usually
// sits among the first few breakpoints, so the sorted prefix grows
// geometrically instead of ordering everything.
std::size_t weighted_select(std::vector<Breakpoint>& points, double need) {
  double total = 0.0;
  for (const auto& b : points) total += b.jump;
  if (total < need) return kNone;

  const auto by_t = [](const Breakpoint& a, const Breakpoint& b) {
    return a.t < b.t || (a.t == b.t && a.row < b.row);
  };
  const std::size_t n = points.size();
  std::size_t lo = 0;
  std::size_t width = 64;
  double acc = 0.0;
  while (lo < n) {
    const std::size_t hi = std::min(n, lo + width);
    if (hi < n) std::nth_element(points.begin() + lo, points.begin() + hi, points.end(), by_t);
    std::sort(points.begin() + lo, points.begin() + hi, by_t);
    for (std::size_t i = lo; i < hi; ++i) {
      acc += points[i].jump;
      if (acc >= need) return i;
    }
    lo = hi;
    width *= 8;
  }
  // Only reachable through rounding in the running sums.
  return n - 1;
}

class LadSimplex {
 public:
  LadSimplex(const LadProblem& problem, const LadOptions& options)
      : pb_(problem), opt_(options), p_(problem.unknowns()), T_(problem.rows()) {
    weight_sum_ = problem.weights.sum();
    row_scale_ = T_ > 0 ? problem.design.cwiseAbs().maxCoeff() : 1.0;
    if (!(row_scale_ > 0.0)) row_scale_ = 1.0;
    residual_active_.assign(static_cast<std::size_t>(T_), 0);
  }

  LadSolution run(const Eigen::VectorXd& start, const LadBasis* warm) {
    bool warm_started = warm != nullptr && try_warm_start(*warm);
    if (!warm_started) init_active_set(start);
    const std::int64_t max_iter =
        opt_.max_iterations > 0 ? opt_.max_iterations : 1000 + 20 * (T_ + p_);

    LadSolution best;
    best.objective = std::numeric_limits<double>::infinity();
    int degenerate_run = 0;
    std::vector<Breakpoint> breaks;
    breaks.reserve(static_cast<std::size_t>(T_));

    for (std::int64_t iter = 0;; ++iter) {
      if (!factor_and_solve()) throw std::logic_error("active rows became linearly dependent");
      const double objective = evaluate_vertex(iter % kRefreshInterval == 0);
      if (objective < best.objective) {
        best.x = x_;
        best.objective = objective;
        best.basis.rows = active_;
      }
      best.iterations = iter;
      if (iter >= max_iter) {
        best.status = LadStatus::iteration_cap;
        break;
      }

      const bool bland = degenerate_run >= opt_.degenerate_limit;
      Candidate leaving = choose_leaving(bland);
      if (leaving.slot < 0) {
        best.status = LadStatus::optimal;
        break;
      }

      const Eigen::VectorXd d = leaving.sign * inverse_.col(leaving.slot);
      ad_.noalias() = pb_.design * d;
      const double step = line_search(leaving, d, ad_, breaks);
      if (step > 0.0) residual_ += step * ad_;
      degenerate_run = step > 0.0 ? 0 : degenerate_run + 1;
    }
    best.warm_started = warm_started;
    return best;
  }

 private:
  struct Candidate {
    Eigen::Index slot = -1;
    double sign = 0.0;
    double slope = 0.0;  // directional derivative, zero residuals excluded
  };

  Eigen::VectorXd row_vector(const ActiveRow& row) const {
    switch (row.kind) {
      case RowKind::equality:
        return pb_.eq_matrix.row(row.index).transpose();
      case RowKind::residual:
        return pb_.design.row(row.index).transpose();
      default:
        return Eigen::VectorXd::Unit(p_, row.index);
    }
  }

  bool try_warm_start(const LadBasis& warm) {
    if (static_cast<Eigen::Index>(warm.rows.size()) != p_) return false;
    active_.clear();
    std::vector<char> coord_seen(static_cast<std::size_t>(p_), 0);
    for (ActiveRow row : warm.rows) {
      switch (row.kind) {
        case RowKind::equality:
          if (row.index < 0 || row.index >= pb_.eq_matrix.rows()) return false;
          row.value = pb_.eq_rhs[row.index];
          break;
        case RowKind::residual:
          if (row.index < 0 || row.index >= T_) return false;
          row.value = pb_.target[row.index];
          break;
        case RowKind::lower:
        case RowKind::upper:
        case RowKind::free:
          if (row.index < 0 || row.index >= p_ || coord_seen[static_cast<std::size_t>(row.index)]) {
            return false;
          }
          coord_seen[static_cast<std::size_t>(row.index)] = 1;
          if (row.kind == RowKind::lower) row.value = pb_.lower[row.index];
          if (row.kind == RowKind::upper) row.value = pb_.upper[row.index];
          if (!std::isfinite(row.value)) return false;
          break;
      }
      active_.push_back(row);
    }
    Eigen::Index eq_rows = 0;
    for (const auto& row : active_) eq_rows += row.kind == RowKind::equality ? 1 : 0;
    if (eq_rows != pb_.eq_matrix.rows()) return false;

    if (!factor_and_solve()) return false;
    for (Eigen::Index j = 0; j < p_; ++j) {
      if (x_[j] < pb_.lower[j] || x_[j] > pb_.upper[j]) return false;
    }
    std::fill(residual_active_.begin(), residual_active_.end(), 0);
    coordinate_active_.assign(static_cast<std::size_t>(p_), 0);
    for (const auto& row : active_) {
      if (row.kind == RowKind::residual) {
        residual_active_[static_cast<std::size_t>(row.index)] = 1;
      } else if (row.kind != RowKind::equality) {
        coordinate_active_[static_cast<std::size_t>(row.index)] = 1;
      }
    }
    return true;
  }

  void init_active_set(const Eigen::VectorXd& start) {
    active_.clear();
    if (start.size() != p_) throw std::invalid_argument("start point has wrong size");
    const double scale = 1.0 + start.cwiseAbs().maxCoeff();
    if (pb_.eq_matrix.rows() > 0 &&
        ((pb_.eq_matrix * start - pb_.eq_rhs).cwiseAbs().maxCoeff() > 1e-9 * scale)) {
      throw std::invalid_argument("start point violates the equality constraints");
    }
    for (Eigen::Index j = 0; j < p_; ++j) {
      if (start[j] < pb_.lower[j] || start[j] > pb_.upper[j]) {
        throw std::invalid_argument("start point violates the bounds");
      }
    }

    // Greedy independent selection via Gram-Schmidt on the candidate rows.
    std::vector<Eigen::VectorXd> basis;
    const auto try_add = [&](const ActiveRow& row) {
      Eigen::VectorXd v = row_vector(row);
      const double norm0 = v.norm();
      if (norm0 == 0.0) return false;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : basis) v -= q.dot(v) * q;
      }
      if (v.norm() <= 1e-10 * norm0) return false;
      basis.push_back(v / v.norm());
      active_.push_back(row);
      return true;
    };
    for (Eigen::Index k = 0; k < pb_.eq_matrix.rows(); ++k) {
      if (!try_add({RowKind::equality, k, pb_.eq_rhs[k]})) {
        throw std::invalid_argument("equality constraints are linearly dependent");
      }
    }
    for (Eigen::Index j = 0; j < p_ && static_cast<Eigen::Index>(active_.size()) < p_; ++j) {
      if (start[j] == pb_.lower[j]) {
        try_add({RowKind::lower, j, pb_.lower[j]});
      } else if (start[j] == pb_.upper[j]) {
        try_add({RowKind::upper, j, pb_.upper[j]});
      } else {
        try_add({RowKind::free, j, start[j]});
      }
    }
    if (static_cast<Eigen::Index>(active_.size()) != p_) {
      throw std::logic_error("could not assemble an initial vertex");
    }
    std::fill(residual_active_.begin(), residual_active_.end(), 0);
    coordinate_active_.assign(static_cast<std::size_t>(p_), 0);
    for (const auto& row : active_) {
      if (row.kind != RowKind::equality && row.kind != RowKind::residual) {
        coordinate_active_[static_cast<std::size_t>(row.index)] = 1;
      }
    }
  }

  // False if the active rows are (numerically) dependent.
  bool factor_and_solve() {
    Eigen::MatrixXd m(p_, p_);
    Eigen::VectorXd rhs(p_);
    for (Eigen::Index k = 0; k < p_; ++k) {
      m.row(k) = row_vector(active_[static_cast<std::size_t>(k)]).transpose();
      rhs[k] = active_[static_cast<std::size_t>(k)].value;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    if (!(lu.rcond() > 1e-14)) return false;
    inverse_ = lu.inverse();
    x_ = lu.solve(rhs);
    // Bound rows hold exactly.
    for (const auto& row : active_) {
      if (row.kind == RowKind::lower || row.kind == RowKind::upper || row.kind == RowKind::free) {
        x_[row.index] = row.value;
      }
    }
    return true;
  }

  // Residuals, signs and the objective gradient at x_. Between full
  // refreshes the residuals come from the line-search update and only sign
  // flips touch the gradient.
  double evaluate_vertex(bool refresh) {
    if (refresh) {
      residual_.noalias() = pb_.design * x_;
      residual_ -= pb_.target;
      sign_.setZero(T_);
    }
    double objective = 0.0;
    for (Eigen::Index i = 0; i < T_; ++i) {
      const double r = residual_[i];
      const bool nonzero = !residual_active_[static_cast<std::size_t>(i)] &&
                           std::abs(r) > opt_.zero_tol * (1.0 + std::abs(pb_.target[i]));
      const double s = nonzero ? std::copysign(1.0, r) : 0.0;
      if (!refresh && s != sign_[i]) {
        const double delta = pb_.weights[i] * (s - sign_[i]);
        for (Eigen::Index j = 0; j < p_; ++j) gradient_[j] += delta * pb_.design(i, j);
      }
      sign_[i] = s;
      objective += pb_.weights[i] * std::abs(r);
    }
    if (refresh) {
      weighted_sign_ = pb_.weights.cwiseProduct(sign_);
      gradient_.noalias() = pb_.design.transpose() * weighted_sign_;
    }
    return objective;
  }

  Candidate choose_leaving(bool bland) const {
    const Eigen::VectorXd dual = inverse_.transpose() * gradient_;
    const double threshold = -opt_.opt_tol * weight_sum_;
    Candidate best;
    double best_score = 0.0;
    Eigen::Index best_order = std::numeric_limits<Eigen::Index>::max();
    for (Eigen::Index k = 0; k < p_; ++k) {
      const ActiveRow& row = active_[static_cast<std::size_t>(k)];
      double slope = 0.0;
      double sign = 0.0;
      switch (row.kind) {
        case RowKind::equality:
          continue;
        case RowKind::residual:
          sign = dual[k] > 0.0 ? -1.0 : 1.0;
          slope = -std::abs(dual[k]) + pb_.weights[row.index];
          break;
        case RowKind::lower:
          sign = 1.0;
          slope = dual[k];
          break;
        case RowKind::upper:
          sign = -1.0;
          slope = -dual[k];
          break;
        case RowKind::free:
          sign = dual[k] > 0.0 ? -1.0 : 1.0;
          slope = -std::abs(dual[k]);
          break;
      }
      if (slope >= threshold) continue;
      if (bland) {
        const Eigen::Index order = row.kind == RowKind::residual ? row.index : T_ + row.index;
        if (order < best_order) {
          best_order = order;
          best = {k, sign, slope};
        }
      } else {
        const double score = slope / inverse_.col(k).norm();
        if (score < best_score) {
          best_score = score;
          best = {k, sign, slope};
        }
      }
    }
    return best;
  }

  // Moves along d, swaps the blocking row into the active set and returns the
  // step length.
  double line_search(const Candidate& leaving, const Eigen::VectorXd& d, const Eigen::VectorXd& ad,
                     std::vector<Breakpoint>& breaks) {
    const ActiveRow& leaving_row = active_[static_cast<std::size_t>(leaving.slot)];
    double slope = leaving.slope;

    // First bound crossed.
    double t_bound = std::numeric_limits<double>::infinity();
    Eigen::Index bound_coord = -1;
    bool bound_upper = false;
    const double d_tiny = 1e-13 * d.cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < p_; ++j) {
      const bool own = leaving_row.kind != RowKind::equality &&
                       leaving_row.kind != RowKind::residual && leaving_row.index == j;
      if (coordinate_active_[static_cast<std::size_t>(j)] && !own) continue;
      if (std::abs(d[j]) <= d_tiny) continue;
      double t = std::numeric_limits<double>::infinity();
      bool upper = false;
      if (d[j] > 0.0 && std::isfinite(pb_.upper[j])) {
        t = (pb_.upper[j] - x_[j]) / d[j];
        upper = true;
      } else if (d[j] < 0.0 && std::isfinite(pb_.lower[j])) {
        t = (pb_.lower[j] - x_[j]) / d[j];
      }
      t = std::max(t, 0.0);
      if (t < t_bound) {
        t_bound = t;
        bound_coord = j;
        bound_upper = upper;
      }
    }

    // Breakpoints are first collected only up to a few times the previous
    // step; the full range is scanned again if that window is too short.
    const double ad_tiny = 1e-12 * row_scale_ * d.cwiseAbs().maxCoeff();
    // Written without data-dependent branches: about half the rows have t > 0.
    const auto collect = [&](double t_max) {
      breaks.resize(static_cast<std::size_t>(T_));
      std::size_t n = 0;
      for (Eigen::Index i = 0; i < T_; ++i) {
        const double rate = ad[i];
        const double a = std::abs(rate);
        const bool usable = !residual_active_[static_cast<std::size_t>(i)] && a > ad_tiny;
        const bool zero = sign_[i] == 0.0;
        const double t = zero ? 0.0 : -residual_[i] / rate;
        const bool keep = usable & (zero ? t_bound > 0.0 : (t > 0.0) & (t < t_max));
        breaks[n] = {t, (zero ? 1.0 : 2.0) * pb_.weights[i] * a, i};
        n += keep ? 1 : 0;
      }
      breaks.resize(n);
    };
    const double cap = step_hint_ > 0.0 ? 8.0 * step_hint_ : t_bound;
    std::size_t hit = kNone;
    if (cap < t_bound) {
      collect(cap);
      hit = weighted_select(breaks, -slope);
    }
    if (hit == kNone) {
      collect(t_bound);
      hit = weighted_select(breaks, -slope);
    }
    ActiveRow entering;
    double step = 0.0;
    if (hit != kNone) {
      const Breakpoint& b = breaks[hit];
      entering = {RowKind::residual, b.row, pb_.target[b.row]};
      step = b.t;
    } else if (bound_coord >= 0) {
      entering = {bound_upper ? RowKind::upper : RowKind::lower, bound_coord,
                  bound_upper ? pb_.upper[bound_coord] : pb_.lower[bound_coord]};
      step = t_bound;
    } else {
      throw std::runtime_error("least-absolute-deviations program is unbounded");
    }

    if (leaving_row.kind == RowKind::residual) {
      residual_active_[static_cast<std::size_t>(leaving_row.index)] = 0;
    } else if (leaving_row.kind != RowKind::equality) {
      coordinate_active_[static_cast<std::size_t>(leaving_row.index)] = 0;
    }
    if (entering.kind == RowKind::residual) {
      residual_active_[static_cast<std::size_t>(entering.index)] = 1;
    } else {
      coordinate_active_[static_cast<std::size_t>(entering.index)] = 1;
    }
    active_[static_cast<std::size_t>(leaving.slot)] = entering;
    if (step > 0.0) step_hint_ = step;
    return step;
  }

  const LadProblem& pb_;
  LadOptions opt_;
  Eigen::Index p_;
  Eigen::Index T_;
  double weight_sum_ = 1.0;
  double row_scale_ = 1.0;
  double step_hint_ = 0.0;  // last positive step length

  std::vector<ActiveRow> active_;
  std::vector<char> residual_active_;
  std::vector<char> coordinate_active_;

  Eigen::MatrixXd inverse_;
  Eigen::VectorXd x_;
  Eigen::VectorXd residual_;
  Eigen::VectorXd sign_;
  Eigen::VectorXd weighted_sign_;
  Eigen::VectorXd gradient_;
  Eigen::VectorXd ad_;
};

void validate(const LadProblem& pb) {
  const Eigen::Index T = pb.rows();
  const Eigen::Index p = pb.unknowns();
  if (p < 1) throw std::invalid_argument("problem has no unknowns");
  if (pb.target.size() != T || pb.weights.size() != T) {
    throw std::invalid_argument("target/weights length must equal the number of rows");
  }
  if (pb.eq_matrix.rows() != pb.eq_rhs.size() ||
      (pb.eq_matrix.rows() > 0 && pb.eq_matrix.cols() != p)) {
    throw std::invalid_argument("equality block has inconsistent shape");
  }
  if (pb.lower.size() != p || pb.upper.size() != p) {
    throw std::invalid_argument("bounds must have one entry per unknown");
  }
  if ((pb.weights.array() <= 0.0).any()) throw std::invalid_argument("weights must be positive");
  if (!pb.design.allFinite() || !pb.target.allFinite()) {
    throw std::invalid_argument("design and target must be finite");
  }
}

}  // namespace

double lad_objective(const LadProblem& problem, const Eigen::VectorXd& x) {
  return problem.weights.dot((problem.design * x - problem.target).cwiseAbs());
}

LadSolution solve_lad(const LadProblem& problem, const Eigen::VectorXd& start,
                      const LadOptions& options, const LadBasis* warm) {
  validate(problem);
  LadSimplex simplex(problem, options);
  return simplex.run(start, warm);
}

}  // namespace corr
