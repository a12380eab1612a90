#pragma once

#include <cstdint>
#include <random>

namespace pcfgc {

// Unbiased draw from [0, bound) via rejection sampling. std::mt19937_64 output
// is pinned by the standard, and this sampler avoids the library-specific
// behaviour of std::uniform_int_distribution, so seeded runs reproduce
// bit-exactly on any conforming implementation.
inline uint64_t draw_below(std::mt19937_64& rng, uint64_t bound) {
  const uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  for (;;) {
    const uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

}  // namespace pcfgc
