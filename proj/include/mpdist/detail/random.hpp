#pragma once

#include <cstdint>
#include <random>

namespace mpdist::detail {

// Portable seeded generator. std::uniform_*_distribution are implementation
// defined, so the draws below are built directly on the raw 64-bit stream
// to keep outputs identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix(seed)) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform in [0, n) by rejection; n > 0.
  std::uint64_t index(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  // Derive an independent stream seed from a base seed and a salt.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t salt) {
    return splitmix(seed ^ splitmix(salt + 0x632be59bd9b4e019ULL));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mpdist::detail
