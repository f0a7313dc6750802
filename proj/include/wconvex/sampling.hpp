#pragma once

// Reproducible sample streams. Every sample index owns an independent
// generator derived from (seed, index), so a stream can be partitioned
// across workers without changing any drawn value.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>

#include "wconvex/core.hpp"

namespace wconvex {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Generator for sample `index` of the stream `seed`.
inline Rng sample_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(splitmix64(seed ^ splitmix64(index)))};
  return Rng(seq);
}

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t uniform_index(Rng& rng, std::size_t count) {
  return std::uniform_int_distribution<std::size_t>(0, count - 1)(rng);
}

inline constexpr int kTGridIntervals = 16;

/// Convex-combination parameter for sample `index`: even indices walk the
/// grid {0, 1/16, ..., 1}, odd indices draw uniformly from [0, 1].
inline double draw_t(Rng& rng, std::uint64_t index) {
  if (index % 2 == 0) {
    return static_cast<double>((index / 2) % (kTGridIntervals + 1)) / kTGridIntervals;
  }
  return uniform(rng);
}

/// Same as draw_t but confined to [lo, hi]; the grid is mapped affinely.
inline double draw_t_in(Rng& rng, std::uint64_t index, double lo, double hi) {
  return lo + (hi - lo) * draw_t(rng, index);
}

/// Worker count from WCONVEX_WORKERS, defaulting to 1.
inline std::size_t default_workers() {
  if (const char* env = std::getenv("WCONVEX_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

}  // namespace wconvex
