#pragma once

#include <cstdint>
#include <random>

namespace robustelm {

/// Seeded 64-bit Mersenne Twister with a hand-rolled uniform mapping, so draws
/// replay bit-identically across standard libraries (std distributions are
/// implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace robustelm
