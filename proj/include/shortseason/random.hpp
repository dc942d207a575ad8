#pragma once

#include <cstdint>
#include <random>

namespace shortseason {

// Stream derivation for reproducible Monte Carlo. A (seed, stream) pair maps
// to an independent std::mt19937_64 via two rounds of SplitMix64 mixing, so
// work split into fixed-size blocks gives identical draws no matter which
// thread processes which block.
inline std::uint64_t splitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 streamEngine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(splitMix64(seed)),
                    static_cast<std::uint32_t>(splitMix64(seed) >> 32),
                    static_cast<std::uint32_t>(splitMix64(seed ^ splitMix64(stream))),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

// Uniform double in [0, 1) built from the top 53 bits; unlike
// std::uniform_real_distribution its output is fixed across standard libraries.
inline double uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(std::mt19937_64& engine, double p) {
  return uniform01(engine) < p;
}

// Uniform integer in [0, n) by rejection; portable like uniform01.
inline std::uint64_t uniformIndex(std::mt19937_64& engine, std::uint64_t n) {
  const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
  std::uint64_t r;
  do {
    r = engine();
  } while (r >= limit);
  return r % n;
}

template <typename RandomIt>
void portableShuffle(RandomIt first, RandomIt last, std::mt19937_64& engine) {
  const auto n = last - first;
  for (auto i = n - 1; i > 0; --i) {
    const auto j = static_cast<decltype(i)>(uniformIndex(engine, static_cast<std::uint64_t>(i) + 1));
    std::swap(first[i], first[j]);
  }
}

}  // namespace shortseason
