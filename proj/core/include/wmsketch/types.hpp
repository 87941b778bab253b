#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wmsketch {

using feature_t = uint32_t;

// Sparse vector with ids ascending and unique, values finite and nonzero.
// Construction goes through from_pairs(), which sorts, coalesces duplicates
// by summation, drops exact zeros and rejects non-finite values.
class SparseVector {
 public:
  using Entry = std::pair<feature_t, double>;

  SparseVector() = default;

  static SparseVector from_pairs(std::vector<Entry> entries);
  static SparseVector unit(feature_t id, double value = 1.0);

  const std::vector<Entry>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<Entry> entries_;
};

inline SparseVector SparseVector::from_pairs(std::vector<Entry> entries) {
  for (const auto& [id, v] : entries) {
    if (!std::isfinite(v)) throw std::invalid_argument("sparse vector value must be finite");
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  SparseVector out;
  out.entries_.reserve(entries.size());
  for (size_t i = 0; i < entries.size();) {
    feature_t id = entries[i].first;
    double sum = 0.0;
    for (; i < entries.size() && entries[i].first == id; i++) sum += entries[i].second;
    if (sum != 0.0) out.entries_.emplace_back(id, sum);
  }
  return out;
}

inline SparseVector SparseVector::unit(feature_t id, double value) {
  return from_pairs({{id, value}});
}

struct LabeledExample {
  SparseVector x;
  int y;  // -1 or +1
};

struct WeightEntry {
  feature_t feature;
  double weight;
};

// Ranked estimate: entries in decreasing |weight|, ties by smaller id first.
using TopKEstimate = std::vector<WeightEntry>;

}  // namespace wmsketch
