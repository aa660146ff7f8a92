#pragma once

#include <cstdint>

namespace finhom {

// SplitMix64. Every random choice in the library is drawn from this
// generator so that runs are reproducible across platforms; std::
// distributions are avoided for the same reason.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed = 0) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform value in [0, n) by rejection; n must be positive.
  uint64_t below(uint64_t n) {
    uint64_t lim = ~uint64_t(0) - ~uint64_t(0) % n;
    uint64_t v;
    do {
      v = next();
    } while (v >= lim);
    return v % n;
  }

  bool coin() { return next() & 1; }

 private:
  uint64_t state_;
};

inline uint64_t hash_mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace finhom
