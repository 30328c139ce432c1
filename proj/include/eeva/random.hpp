#pragma once

// Platform-independent random stream. The standard distributions are
// implementation-defined, so sampling is done by hand on top of the
// (fully specified) 64-bit Mersenne Twister to keep traces and runs
// bit-identical across toolchains.

#include <cstdint>
#include <random>
#include <span>

namespace eeva {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n); n must be positive.
  std::uint64_t uniform_below(std::uint64_t n);

  // Uniform integer in [lo, hi].
  std::uint64_t uniform_between(std::uint64_t lo, std::uint64_t hi) {
    return lo + uniform_below(hi - lo + 1);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Index drawn from a non-decreasing cumulative weight table whose last
  // entry is the total mass.
  std::size_t pick_cumulative(std::span<const double> cumulative);

 private:
  std::mt19937_64 engine_;
};

// Seed for the i-th member of a repetition set.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t i) { return base + i; }

// Decorrelated sub-stream seed (splitmix64 finalizer), used to give each
// consumer of one run seed its own stream.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace eeva
