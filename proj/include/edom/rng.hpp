#pragma once

// Seeded randomness with a portable definition: std::mt19937_64 (the
// standard 64-bit Mersenne Twister) plus rejection sampling for bounded
// draws, so any language with MT19937-64 reproduces the same sequence.

#include <cstdint>
#include <random>

namespace edom {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound). Draws above the largest multiple of `bound` are rejected.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace edom
