#pragma once

#include <cstdint>
#include <vector>

#include "wmsketch/hashing.hpp"
#include "wmsketch/types.hpp"

namespace wmsketch {

// Median with the fixed convention used throughout: sort ascending; odd count
// takes the middle element, even count the mean of the two central ones.
double median(std::vector<double> values);

// Count-Sketch over k total accumulators arranged as depth rows of width
// k/depth. Single-writer; concurrent reads of a quiescent sketch are safe.
class CountSketch {
 public:
  // k must be a positive multiple of depth.
  CountSketch(uint64_t seed, uint64_t k, uint32_t depth);
  CountSketch(hash::HashFamily family, uint64_t k, uint32_t depth);

  void update(feature_t key, double delta);   // rejects non-finite delta
  double query(feature_t key) const;          // median of signed buckets
  // sum over rows of sign(row, key) * bucket(row, key); the margin kernel
  double signed_row_sum(feature_t key) const;
  void merge(const CountSketch& other);       // element-wise sum; configs must match

  uint64_t k() const { return k_; }
  uint32_t depth() const { return depth_; }
  uint32_t width() const { return width_; }
  uint64_t seed() const { return seed_; }
  const hash::HashFamily& family() const { return family_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

 private:
  uint64_t seed_;
  uint64_t k_;
  uint32_t depth_;
  uint32_t width_;
  hash::HashFamily family_;
  std::vector<double> values_;  // row-major depth x width
  mutable std::vector<double> row_buf_;
};

// Count-Min: same layout, nonnegative updates, min query.
class CountMin {
 public:
  CountMin(uint64_t seed, uint64_t k, uint32_t depth);

  void update(feature_t key, double delta);  // rejects negative or non-finite delta
  double query(feature_t key) const;         // min over rows; never underestimates

  uint64_t k() const { return k_; }
  uint32_t depth() const { return depth_; }
  uint32_t width() const { return width_; }
  const std::vector<double>& values() const { return values_; }

 private:
  uint64_t seed_;
  uint64_t k_;
  uint32_t depth_;
  uint32_t width_;
  hash::HashFamily family_;
  std::vector<double> values_;
};

}  // namespace wmsketch
