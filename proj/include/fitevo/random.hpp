#pragma once

#include <cstdint>
#include <random>

namespace fitevo {

// mt19937_64 output is fixed by the standard, so runs are reproducible
// across toolchains as long as we avoid the std:: distributions.
using Rng = std::mt19937_64;

/// Uniform on [0,1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform on (0,1]; safe to pass to log().
inline double uniform_open0(Rng& rng) {
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for replica `index` of a run seeded with `base`.
inline std::uint64_t replica_seed(std::uint64_t base, std::uint64_t index) {
  return mix64(base + index);
}

}  // namespace fitevo
