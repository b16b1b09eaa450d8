#include "corr/sampler.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

namespace corr {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

Point Rng::ball_point(int dim, double radius) {
  Point p(dim);
  double norm = 0.0;
  do {
    for (int i = 0; i < dim; ++i) p[i] = normal();
    norm = p.norm();
  } while (norm == 0.0);
  const double r = radius * std::pow(uniform(), 1.0 / dim);
  p *= r / norm;
  // Rounding can push |p| a hair past the radius.
  const double actual = p.norm();
  if (actual > radius) p *= radius / actual;
  return p;
}

PointMatrix draw_ball_uniform(int dim, double radius, std::size_t count, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  if (count == 0) throw std::invalid_argument("sample count must be >= 1");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  Rng rng(seed);
  PointMatrix points(static_cast<Eigen::Index>(count), dim);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    points.row(i) = rng.ball_point(dim, radius).transpose();
  }
  return points;
}

SampleSet evaluate_set(const Objective& fn, PointMatrix points, std::uint64_t seed,
                       SetId set_id) {
  if (points.cols() != fn.dim()) throw std::invalid_argument("sample dimension mismatch");
  SampleSet set;
  set.values.resize(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    set.values[i] = fn.evaluate(points.row(i).transpose());
  }
  set.points = std::move(points);
  set.seed = seed;
  set.set_id = set_id;
  return set;
}

SampleSet draw_sample_set(const Objective& fn, std::size_t count, std::uint64_t seed,
                          SetId set_id) {
  const auto stream = static_cast<std::uint64_t>(set_id);
  PointMatrix points =
      draw_ball_uniform(fn.dim(), fn.domain_radius(), count, derive_seed(seed, stream));
  return evaluate_set(fn, std::move(points), seed, set_id);
}

void write_sample_csv(std::ostream& out, const SampleSet& samples) {
  out << "index";
  for (int j = 0; j < samples.dim(); ++j) out << ",x_" << (j + 1);
  out << ",f\n";
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    out << i;
    for (int j = 0; j < samples.dim(); ++j) out << fmt::format(",{:.17g}", samples.points(i, j));
    out << fmt::format(",{:.17g}\n", samples.values[i]);
  }
}

}  // namespace corr
