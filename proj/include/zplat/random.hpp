#pragma once

// Seeded randomness with a portable bounded draw, so every seeded run yields
// the same numbers on every platform and standard library.

#include "zplat/integer.hpp"

#include <cstdint>
#include <random>

namespace zplat {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  bool coin() { return uniform(0, 1) == 1; }

 private:
  std::mt19937_64 engine_;
};

/// A random unimodular matrix together with its exact inverse.
struct Scramble {
  IntMatrix S;
  IntMatrix S_inverse;
};

/// Product of random elementary operations: row additions with small
/// multipliers, swaps and sign flips.
Scramble random_unimodular(Eigen::Index n, Rng& rng, int steps = -1);

}  // namespace zplat
