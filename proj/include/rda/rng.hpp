#pragma once

#include <cstdint>

namespace rda {

// Deterministic, platform-independent random source.
//
// Generator: xoshiro256++ seeded through splitmix64, normal variates by the
// Marsaglia polar method. Parallel streams are obtained by deriving child
// seeds with derive_seed(seed, stream) instead of sharing generator state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // uniform in [0, 1) with 53 random bits
  double uniform();

  // standard normal N(0, 1)
  double normal();

  // uniform integer in [0, bound), bound >= 1, rejection-sampled (no modulo bias)
  std::uint64_t uniform_below(std::uint64_t bound);

 private:
  std::uint64_t state_[4];
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

// splitmix64 step; also usable as a mixing function
std::uint64_t splitmix64(std::uint64_t& state);

// Stable child-seed derivation for seed-splitting parallelism: mixes the
// parent seed with a stream index so distinct streams are uncorrelated.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace rda
