#pragma once

#include <cstdint>

#include "spinbath/operators.hpp"

namespace spinbath {

// Deterministic cross-platform generator (splitmix64). The standard library
// distributions are implementation-defined, so sampling is hand-rolled.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller.
  double normal();

  // Independent stream for a labeled subtask.
  SplitMix64 split(std::uint64_t label);
};

// Ginibre matrix: independent standard complex normal entries.
Matrix random_ginibre(Eigen::Index dim, SplitMix64& rng);

// GUE-like random Hermitian matrix, entries O(1).
Matrix random_hermitian(Eigen::Index dim, SplitMix64& rng);

// G G* / Tr(G G*) with G Ginibre; almost surely full rank.
Matrix random_density(Eigen::Index dim, SplitMix64& rng);

// (1 - mix) random_density + mix I/d; eigenvalues >= mix/d.
Matrix random_faithful_density(Eigen::Index dim, SplitMix64& rng, double mix = 0.1);

}  // namespace spinbath
