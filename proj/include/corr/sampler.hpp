#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string_view>

#include "corr/testbed.hpp"
#include "corr/types.hpp"

namespace corr {

// Recorded in every result file. Bump the suffix whenever any of the
// pieces below changes the stream of generated points.
//   engine : std::mt19937_64 (sequence fixed by the C++ standard)
//   seeding: splitmix64 finaliser of (seed, stream)
//   uniform: top 53 bits * 2^-53
//   normal : Marsaglia polar method
inline constexpr std::string_view kGeneratorVersion = "mt19937_64+splitmix64+polar/v1";

std::uint64_t splitmix64(std::uint64_t x);

// Independent stream seed for (seed, stream); distinct streams never share
// an engine state for the same seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Portable random source: does not use the implementation-defined
// std::*_distribution transforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1).
  double uniform();
  // Standard normal.
  double normal();
  // Uniform point in the closed ball B(0, radius).
  Point ball_point(int dim, double radius);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

enum class SetId : std::uint64_t { one = 1, two = 2 };

struct SampleSet {
  PointMatrix points;
  Eigen::VectorXd values;
  std::uint64_t seed = 0;
  SetId set_id = SetId::one;

  Eigen::Index size() const { return points.rows(); }
  int dim() const { return static_cast<int>(points.cols()); }
};

// `count` points uniform in B(0, radius): Gaussian direction normalised to
// unit length, radius * U^(1/dim) for the distance.
PointMatrix draw_ball_uniform(int dim, double radius, std::size_t count, std::uint64_t seed);

SampleSet evaluate_set(const Objective& fn, PointMatrix points, std::uint64_t seed, SetId set_id);

// Draws and evaluates one of the two sample sets. The generator stream is
// derive_seed(seed, set_id) so the two sets are independent.
SampleSet draw_sample_set(const Objective& fn, std::size_t count, std::uint64_t seed,
                          SetId set_id);

// Columns: index, x_1..x_n, f.
void write_sample_csv(std::ostream& out, const SampleSet& samples);

}  // namespace corr
