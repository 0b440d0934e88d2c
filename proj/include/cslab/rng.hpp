#pragma once

#include <cstdint>
#include <random>

namespace cslab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent generator for sample `index` of a run seeded with `seed`.
/// Results therefore do not depend on how samples are sharded over workers.
inline std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ index));
}

/// Uniform integer in [0, bound) by rejection; identical on every standard library.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

}  // namespace cslab
