#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace entdist::detail {

// Uniform in (0,1] from the top 53 bits of the engine; avoids the
// implementation-defined std::*_distribution algorithms so sampling is
// reproducible from the seed alone.
inline double canonical_open(std::mt19937_64& eng) {
  return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;
}

inline double exp_variate(std::mt19937_64& eng) {
  return -std::log(canonical_open(eng));
}

// splitmix64 step; derives independent per-slice seeds from one run seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace entdist::detail
