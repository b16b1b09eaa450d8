#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <limits>
#include <string>
#include <utility>

#include "corr/baselines.hpp"
#include "corr/bench/experiments.hpp"
#include "corr/corr_driver.hpp"
#include "corr/envelope_regression.hpp"
#include "corr/sampler.hpp"
#include "corr/surrogate.hpp"
#include "corr/testbed.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

// A Python callable f(x) -> float on B(0, radius).
class CallableObjective : public corr::Objective {
 public:
  CallableObjective(py::function fn, int dim, double radius, double f_star)
      : fn_(std::move(fn)), dim_(dim), radius_(radius), f_star_(f_star) {
    if (dim < 1) throw std::invalid_argument("dim must be positive");
    if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  }
  int dim() const override { return dim_; }
  double domain_radius() const override { return radius_; }
  double f_star() const override { return f_star_; }
  double evaluate(corr::PointRef x) const override {
    corr::check_domain(x, dim_, radius_);
    return fn_(corr::Point(x)).cast<double>();
  }

 private:
  py::function fn_;
  int dim_;
  double radius_;
  double f_star_;
};

corr::CorrConfig make_config(std::size_t T, std::uint64_t seed, int grid, int refine,
                             std::optional<double> r_override, double box_bound, bool polish,
                             std::int64_t polish_budget) {
  corr::CorrConfig cfg;
  cfg.T = T;
  cfg.seed = seed;
  cfg.mu_grid_points = grid;
  cfg.refine_iters = refine;
  cfg.r_override = r_override;
  cfg.box_bound = box_bound;
  cfg.polish = polish;
  cfg.polish_budget = polish_budget;
  cfg.validate();
  return cfg;
}

py::dict surrogate_dict(const corr::QuadSurrogate& s) {
  return py::dict("theta1"_a = s.theta1, "theta2"_a = s.theta2, "theta3"_a = s.theta3);
}

corr::QuadSurrogate surrogate_from(const Eigen::VectorXd& theta1, const Eigen::VectorXd& theta2,
                                   double theta3) {
  if (theta1.size() != theta2.size()) throw std::invalid_argument("theta1 and theta2 differ in length");
  corr::QuadSurrogate s;
  s.theta1 = theta1;
  s.theta2 = theta2;
  s.theta3 = theta3;
  return s;
}

py::list profile_list(const std::vector<corr::ProfilePoint>& profile) {
  py::list out;
  for (const auto& p : profile)
    out.append(py::dict("mu"_a = p.mu, "f"_a = p.f_value, "refinement"_a = p.refinement));
  return out;
}

py::dict baseline_dict(const corr::BaselineResult& r) {
  return py::dict("method"_a = std::string(corr::to_string(r.method)), "x_best"_a = r.x_best,
                  "f_best"_a = r.f_best, "eval_count"_a = r.eval_count,
                  "best_so_far"_a = r.best_so_far);
}

}  // namespace

PYBIND11_MODULE(_corr, m) {
  m.doc() = "Convex relaxation regression for black-box global optimisation";

  py::register_exception<corr::NonConvergence>(m, "NonConvergence", PyExc_RuntimeError);

  py::class_<corr::Objective>(m, "Objective")
      .def_property_readonly("dim", &corr::Objective::dim)
      .def_property_readonly("domain_radius", &corr::Objective::domain_radius)
      .def_property_readonly("f_star", &corr::Objective::f_star)
      .def("evaluate", [](const corr::Objective& f, const corr::Point& x) { return f.evaluate(x); },
           "x"_a)
      .def("__call__", [](const corr::Objective& f, const corr::Point& x) { return f.evaluate(x); });

  py::class_<corr::TestFunction, corr::Objective>(m, "TestFunction")
      .def(py::init([](const std::string& name, int dim) { return corr::make_function(name, dim); }),
           "name"_a, "dim"_a)
      .def_property_readonly("name",
                             [](const corr::TestFunction& f) { return std::string(corr::to_string(f.name())); })
      .def_property_readonly("x_star", &corr::TestFunction::x_star)
      .def_property_readonly("rescale_factor", &corr::TestFunction::rescale_factor)
      .def("evaluate_native",
           [](const corr::TestFunction& f, const corr::Point& z) { return f.evaluate_native(z); }, "z"_a)
      .def("__repr__", [](const corr::TestFunction& f) {
        return "TestFunction('" + std::string(corr::to_string(f.name())) + "', " +
               std::to_string(f.dim()) + ")";
      });

  py::class_<corr::DiagonalQuadratic, corr::Objective>(m, "DiagonalQuadratic")
      .def(py::init<Eigen::VectorXd, corr::Point, double, double>(), "curvature"_a, "center"_a,
           "offset"_a = 0.0, "radius"_a = 2.0)
      .def_property_readonly("x_star", &corr::DiagonalQuadratic::x_star)
      .def_property_readonly("curvature", &corr::DiagonalQuadratic::curvature);

  py::class_<CallableObjective, corr::Objective>(m, "CallableObjective")
      .def(py::init<py::function, int, double, double>(), "fn"_a, "dim"_a, "radius"_a = 2.0,
           "f_star"_a = std::numeric_limits<double>::quiet_NaN());

  m.def("function_names", [] {
    std::vector<std::string> out;
    for (auto name : corr::kAllFunctions) out.emplace_back(corr::to_string(name));
    return out;
  });

  m.def(
      "draw_samples",
      [](const corr::Objective& f, std::size_t T, std::uint64_t seed) {
        auto pair = corr::draw_samples(f, T, seed);
        return py::dict("fit_points"_a = pair.fit.points, "fit_values"_a = pair.fit.values,
                        "mean_points"_a = pair.mean.points, "mean_values"_a = pair.mean.values);
      },
      "function"_a, "T"_a, "seed"_a = 0);

  m.def(
      "fit_envelope",
      [](const corr::PointMatrix& fit_points, const Eigen::VectorXd& fit_values,
         const corr::PointMatrix& mean_points, const Eigen::VectorXd& mean_values, double mu,
         double box_bound) {
        if (fit_points.rows() != fit_values.size() || mean_points.rows() != mean_values.size())
          throw std::invalid_argument("points and values differ in length");
        corr::SampleSet fit{fit_points, fit_values, 0, corr::SetId::one};
        corr::SampleSet mean{mean_points, mean_values, 0, corr::SetId::two};
        const auto res = corr::fit_envelope({fit, mean, mu, box_bound});
        py::dict out = surrogate_dict(res.theta);
        out["objective"] = res.objective;
        out["status"] = std::string(corr::to_string(res.status));
        out["iterations"] = res.iterations;
        return out;
      },
      "fit_points"_a, "fit_values"_a, "mean_points"_a, "mean_values"_a, "mu"_a,
      "box_bound"_a = 1e6);

  m.def(
      "minimize_on_ball",
      [](const Eigen::VectorXd& theta1, const Eigen::VectorXd& theta2, double theta3, double radius) {
        return corr::minimize_on_ball(surrogate_from(theta1, theta2, theta3), radius);
      },
      "theta1"_a, "theta2"_a, "theta3"_a = 0.0, "radius"_a = 2.0);

  m.def(
      "corr_optimize",
      [](const corr::Objective& f, std::size_t T, std::uint64_t seed, int grid, int refine,
         std::optional<double> r_override, double box_bound, bool polish, std::int64_t polish_budget) {
        const auto cfg = make_config(T, seed, grid, refine, r_override, box_bound, polish, polish_budget);
        const auto res = corr::corr_optimize(f, cfg);
        return py::dict("x_hat"_a = res.x_hat, "f_hat"_a = res.f_hat, "mu_hat"_a = res.mu_hat,
                        "theta_hat"_a = surrogate_dict(res.theta_hat), "R_hat"_a = res.R_hat,
                        "profile"_a = profile_list(res.profile), "eval_count"_a = res.eval_count,
                        "polish_evals"_a = res.polish_evals,
                        "f_before_polish"_a = res.f_before_polish, "wall_ms"_a = res.wall_ms);
      },
      "function"_a, "T"_a = 500, "seed"_a = 0, "mu_grid_points"_a = 33, "refine_iters"_a = 40,
      "r_override"_a = py::none(), "box_bound"_a = 1e6, "polish"_a = false,
      "polish_budget"_a = 2000);

  m.def(
      "random_search",
      [](const corr::Objective& f, std::int64_t budget, std::uint64_t seed) {
        return baseline_dict(corr::random_search(f, budget, seed));
      },
      "function"_a, "budget"_a, "seed"_a = 0);

  m.def(
      "simulated_annealing",
      [](const corr::Objective& f, std::int64_t budget, std::uint64_t seed, double t0, double cooling,
         double step_scale) {
        return baseline_dict(corr::simulated_annealing(f, budget, seed, {t0, cooling, step_scale}));
      },
      "function"_a, "budget"_a, "seed"_a = 0, "t0"_a = 1.0, "cooling"_a = 0.995,
      "step_scale"_a = 0.3);

  m.def(
      "nelder_mead",
      [](const corr::Objective& f, const corr::Point& x0, std::int64_t budget) {
        return baseline_dict(corr::nelder_mead(f, x0, budget));
      },
      "function"_a, "x0"_a, "budget"_a);

  m.def(
      "run_experiment",
      [](const std::filesystem::path& config_path) {
        const auto cfg = corr::bench::load_config(config_path);
        corr::bench::RunReport report;
        {
          py::gil_scoped_release release;
          report = corr::bench::run_experiment(cfg);
        }
        return py::dict("run_dir"_a = report.run_dir, "artifacts"_a = report.artifacts,
                        "trials"_a = report.trials.size());
      },
      "config_path"_a);
}
