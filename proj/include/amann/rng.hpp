#pragma once

#include <cstdint>

namespace amann {

// Small counter-seeded generator (splitmix64 core). Each consumer derives
// an independent stream from (seed, stream_index), so parallel sampling
// loops stay reproducible regardless of scheduling. Uniform doubles are
// built from the top 53 bits directly, avoiding the stdlib's
// implementation-defined distributions.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed + 0x9E3779B97F4A7C15ULL) {}

  static Rng stream(std::uint64_t seed, std::uint64_t stream_index) {
    Rng r(seed);
    std::uint64_t mixed = r.next() ^ (stream_index + 0x9E3779B97F4A7C15ULL);
    return Rng(mixed);
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [a, b).
  double uniform(double a, double b) { return a + uniform01() * (b - a); }

private:
  std::uint64_t state_;
};

} // namespace amann
