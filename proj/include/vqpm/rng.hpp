#pragma once

#include <cstdint>
#include <random>

namespace vqpm {

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.  Done by
/// hand because std::uniform_real_distribution is implementation-defined and
/// a seed here must produce the same numbers on every platform.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// SplitMix64 scrambling step; used to derive statistically independent child
/// seeds from (base, tag) combinations.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace vqpm
