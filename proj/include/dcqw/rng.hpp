#pragma once

#include <cstdint>
#include <random>

namespace dcqw {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream for (master seed, realization index, purpose tag).
inline Rng realization_rng(std::uint64_t master, std::uint64_t index, std::uint64_t stream = 0) {
  const std::uint64_t s = splitmix64(splitmix64(splitmix64(master) ^ index) ^ (stream + 1));
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

// Portable draws (std distributions are implementation-defined).
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
inline double uniform_open_closed(Rng& rng) { return 1.0 - uniform01(rng); }
inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }
inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

}  // namespace dcqw
