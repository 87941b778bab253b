#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace wmsketch {

// Counter-based PRNG (splitmix64). Fixed algorithm, so streams replay
// bit-identically on every platform, unlike std:: distributions.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  uint32_t next_u32() { return static_cast<uint32_t>(next() >> 32); }

  // Unbiased-enough bounded draw via 64x64 -> high 64 multiply.
  uint64_t below(uint64_t n) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(next()) * n) >> 64);
  }

  // Uniform in [0, 1).
  double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a base for log() or root keys.
  double real_pos() { return 1.0 - real(); }

  // Standard normal via Box-Muller (deterministic, two draws per call).
  double normal();

 private:
  uint64_t state_;
};

inline double SplitMix64::normal() {
  double u1 = real_pos();
  double u2 = real();
  // cos variant only; callers wanting pairs draw twice
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

// Named sub-stream derivation: all randomness in the library flows from one
// master u64 seed through tags like "hashing", "data", "reservoir", "ptrunc".
uint64_t derive_seed(uint64_t master, std::string_view tag);

}  // namespace wmsketch
