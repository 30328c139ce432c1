#include "eeva/random.hpp"

#include <algorithm>

#include "eeva/core.hpp"

namespace eeva {

std::uint64_t Rng::uniform_below(std::uint64_t n) {
  if (n == 0) throw ContractViolation("uniform_below(0)");
  // Rejection sampling over the largest multiple of n.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

std::size_t Rng::pick_cumulative(std::span<const double> cumulative) {
  if (cumulative.empty()) throw ContractViolation("pick from empty distribution");
  const double target = uniform01() * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace eeva
