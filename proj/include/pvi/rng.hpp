#pragma once

// Deterministic RNG with a fixed cross-platform bit stream. std::mt19937 is
// portable but the std distributions are not; we map to doubles ourselves.

#include <cstdint>

namespace pvi {

struct rng {
  // xoshiro256++ seeded through splitmix64.
  uint64_t s[4];

  explicit rng(uint64_t seed) {
    uint64_t x = seed;
    for (auto& si : s) {
      x += 0x9e3779b97f4a7c15ull;
      uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      si = z ^ (z >> 31);
    }
  }

  static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  uint64_t next() {
    const uint64_t result = rotl(s[0] + s[3], 23) + s[0];
    const uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }

  // uniform in [0,1) with 53 random bits
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * unit(); }

  // uniform integer in [0, n)
  uint64_t below(uint64_t n) { return next() % n; }
};

}  // namespace pvi
