#pragma once

#include <cstdint>
#include <random>

#include "ggsel/special.hpp"

namespace ggsel::math {

// SplitMix64 step; used to derive well-separated seeds from a counter.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based stream seed: the same (master, stream_id) pair always yields
// the same generator state, independent of which thread asks first.
inline std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t stream_id) {
  const std::uint64_t s = splitmix64(splitmix64(master) ^ splitmix64(stream_id * 2 + 1));
  return std::mt19937_64(s);
}

// Uniform draw in the open interval (0, 1): 53 significant bits, offset by
// half an ulp so neither endpoint can occur. Avoids the unspecified sequence
// of std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal draw by inversion; deterministic across platforms.
inline double normal01(std::mt19937_64& rng) {
  return normal_quantile(uniform01(rng));
}

}  // namespace ggsel::math
