#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dasep {

/// SplitMix64 finalizer; decorrelates (seed, trial) pairs into engine seeds.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Random source with platform-independent draws: the engine is fully specified
/// and the variates below are computed here rather than by <random> distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed, 0)) {}
  Rng(std::uint64_t seed, std::uint64_t trial) : engine_(mix_seed(seed, trial)) {}

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dasep
