#pragma once

#include <cstdint>

namespace sparsalloc {

// SplitMix64 used as a counter-based generator: the k-th output (k = 1, 2,
// ...) is mix64(seed + k * 0x9E3779B97F4A7C15) with the standard SplitMix64
// finaliser. The stream is fully determined by the 64-bit seed, so any
// language can reproduce it.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  // (x >> 11) * 2^-53, in [0, 1).
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  // Box-Muller, cosine branch only: consumes two uniforms per normal.
  double normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);

// Independent seed for a named sub-stream, e.g. the calibration data that
// accompanies a generated network.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace sparsalloc
