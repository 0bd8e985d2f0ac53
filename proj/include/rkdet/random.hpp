#pragma once

#include <array>
#include <cstdint>

#include "rkdet/matrix.hpp"

namespace rkdet {

/// One splitmix64 step: advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

/// Independent per-trial seed derived from a base seed and a trial index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// xoshiro256** seeded through splitmix64. The output stream depends only on
/// the seed, so failing seeds reproduce across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n);
  /// Standard normal via Box-Muller (cosine branch only).
  double normal();
  /// Complex Gaussian with E|z|^2 = 1.
  Complex complex_normal();

 private:
  std::array<std::uint64_t, 4> state_;
};

}  // namespace rkdet
