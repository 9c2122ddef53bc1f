#pragma once

#include <cstdint>
#include <numbers>

#include <Eigen/Core>

namespace ddpen {

using Point2 = Eigen::Vector2d;

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

/// SplitMix64 generator. Used instead of <random> distributions so that
/// generated maps, datasets and bench seeds are identical across standard
/// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 bits of mantissa.
  double uniform01();
  double uniform(double lo, double hi);
  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  std::uint64_t state_;
};

/// Independent stream seed for (master, stream) pairs.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace ddpen
