#include "ddpen/common.hpp"

#include <cmath>

namespace ddpen {

double normalize_angle(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, kTwoPi);
  if (a <= -std::numbers::pi) {
    a += kTwoPi;
  } else if (a > std::numbers::pi) {
    a -= kTwoPi;
  }
  return a;
}

std::uint64_t Rng::next_u64() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) {
    return static_cast<std::int64_t>(next_u64());
  }
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t r = next_u64();
  while (r >= limit) {
    r = next_u64();
  }
  return lo + static_cast<std::int64_t>(r % span);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  Rng a(master ^ 0x6A09E667F3BCC909ULL);
  const std::uint64_t base = a.next_u64();
  Rng b(base + stream * 0xD1B54A32D192ED03ULL);
  return b.next_u64();
}

}  // namespace ddpen
