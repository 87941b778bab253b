#include "wmsketch/hashing.hpp"

#include <stdexcept>

#include "wmsketch/rng.hpp"

namespace wmsketch {

uint64_t derive_seed(uint64_t master, std::string_view tag) {
  // FNV-1a over the tag, then mix with the master through splitmix.
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  SplitMix64 g(master ^ h);
  return g.next();
}

namespace hash {

static inline uint32_t rotl32(uint32_t x, int8_t r) {
  return (x << r) | (x >> (32 - r));
}

static inline uint32_t fmix32(uint32_t h) {
  h ^= h >> 16;
  h *= 0x85ebca6b;
  h ^= h >> 13;
  h *= 0xc2b2ae35;
  h ^= h >> 16;
  return h;
}

uint32_t murmur3_32(const void* data, size_t len, uint32_t seed) {
  const uint8_t* bytes = static_cast<const uint8_t*>(data);
  const size_t nblocks = len / 4;
  uint32_t h1 = seed;
  const uint32_t c1 = 0xcc9e2d51;
  const uint32_t c2 = 0x1b873593;

  for (size_t i = 0; i < nblocks; i++) {
    uint32_t k1 = static_cast<uint32_t>(bytes[4 * i]) |
                  (static_cast<uint32_t>(bytes[4 * i + 1]) << 8) |
                  (static_cast<uint32_t>(bytes[4 * i + 2]) << 16) |
                  (static_cast<uint32_t>(bytes[4 * i + 3]) << 24);
    k1 *= c1;
    k1 = rotl32(k1, 15);
    k1 *= c2;
    h1 ^= k1;
    h1 = rotl32(h1, 13);
    h1 = h1 * 5 + 0xe6546b64;
  }

  const uint8_t* tail = bytes + nblocks * 4;
  uint32_t k1 = 0;
  switch (len & 3) {
    case 3: k1 ^= static_cast<uint32_t>(tail[2]) << 16; [[fallthrough]];
    case 2: k1 ^= static_cast<uint32_t>(tail[1]) << 8; [[fallthrough]];
    case 1:
      k1 ^= tail[0];
      k1 *= c1;
      k1 = rotl32(k1, 15);
      k1 *= c2;
      h1 ^= k1;
  }

  h1 ^= static_cast<uint32_t>(len);
  return fmix32(h1);
}

HashFamily::HashFamily(uint64_t seed, uint32_t depth, uint32_t width)
    : seed_(seed), depth_(depth), width_(width) {
  if (depth == 0) throw std::invalid_argument("hash family depth must be positive");
  if (width == 0) throw std::invalid_argument("hash family width must be positive");
  mask_ = (width & (width - 1)) == 0 ? width - 1 : 0;
  bucket_tables_.resize(static_cast<size_t>(depth) * 4 * 256);
  sign_tables_.resize(static_cast<size_t>(depth) * 4 * 256);
  // one splitmix stream per family keeps bucket and sign tables independent
  SplitMix64 bucket_stream(derive_seed(seed, "tabulation/buckets"));
  SplitMix64 sign_stream(derive_seed(seed, "tabulation/signs"));
  for (auto& v : bucket_tables_) v = bucket_stream.next_u32();
  for (auto& v : sign_tables_) v = sign_stream.next_u32();
}

HashFamily HashFamily::injective(uint64_t seed, uint32_t depth, uint32_t width) {
  HashFamily f(seed, depth, width);
  f.identity_buckets_ = true;
  return f;
}

inline uint32_t HashFamily::tabulate(const uint32_t* table, uint32_t key) const {
  return table[key & 0xff] ^ table[256 + ((key >> 8) & 0xff)] ^
         table[512 + ((key >> 16) & 0xff)] ^ table[768 + ((key >> 24) & 0xff)];
}

inline void HashFamily::check_row(uint32_t row) const {
  if (row >= depth_) throw std::out_of_range("hash row out of range");
}

uint32_t HashFamily::bucket(uint32_t row, uint32_t key) const {
  check_row(row);
  if (identity_buckets_) return key % width_;
  uint32_t h = tabulate(&bucket_tables_[static_cast<size_t>(row) * 1024], key);
  return mask_ ? (h & mask_) : (h % width_);
}

int HashFamily::sign(uint32_t row, uint32_t key) const {
  check_row(row);
  uint32_t h = tabulate(&sign_tables_[static_cast<size_t>(row) * 1024], key);
  return (h & 1u) ? 1 : -1;
}

}  // namespace hash
}  // namespace wmsketch
