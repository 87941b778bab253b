#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace wmsketch {
namespace hash {

uint32_t murmur3_32(const void* data, size_t len, uint32_t seed);

// Stable 32-bit id for a string token (murmur3, seed 0).
inline uint32_t token_id(std::string_view s) {
  return murmur3_32(s.data(), s.size(), 0);
}

// Per-row tabulation hashing: one bucket family and one sign family, each row
// backed by 4 sub-tables of 256 32-bit entries filled from a seeded splitmix
// stream. Rows and families are derived independently, so replays are
// bit-identical for a given (seed, depth, width).
class HashFamily {
 public:
  HashFamily(uint64_t seed, uint32_t depth, uint32_t width);

  // Oracle variant for collision-free tests: bucket(row, key) = key % width,
  // signs still tabulation-hashed.
  static HashFamily injective(uint64_t seed, uint32_t depth, uint32_t width);

  uint32_t bucket(uint32_t row, uint32_t key) const;
  int sign(uint32_t row, uint32_t key) const;  // +1 or -1

  uint32_t depth() const { return depth_; }
  uint32_t width() const { return width_; }
  uint64_t seed() const { return seed_; }
  bool identity_buckets() const { return identity_buckets_; }

 private:
  uint32_t tabulate(const uint32_t* table, uint32_t key) const;
  void check_row(uint32_t row) const;

  uint64_t seed_;
  uint32_t depth_;
  uint32_t width_;
  uint32_t mask_;  // width - 1 when width is a power of two, else 0
  bool identity_buckets_ = false;
  std::vector<uint32_t> bucket_tables_;  // depth x 4 x 256
  std::vector<uint32_t> sign_tables_;    // depth x 4 x 256
};

}  // namespace hash
}  // namespace wmsketch
