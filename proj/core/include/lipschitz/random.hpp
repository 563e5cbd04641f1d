#pragma once

#include <cstdint>
#include <random>

namespace lipschitz {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Stream `index` of a master seed; independent of how streams are scheduled.
inline Rng make_stream(std::uint64_t master, std::uint64_t index) {
  return Rng(splitmix64(master + index * 0x9E3779B97F4A7C15ull));
}

// Uniform double in [0, 1) from the top 53 bits; identical on every platform,
// unlike std::uniform_real_distribution.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Uniform integer in [0, n) by rejection, platform independent.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return x % n;
}

inline bool fair_coin(Rng& rng) { return (rng() >> 63) != 0; }

}  // namespace lipschitz
