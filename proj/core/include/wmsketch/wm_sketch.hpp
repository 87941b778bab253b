#pragma once

#include <cstdint>

#include "wmsketch/countsketch.hpp"
#include "wmsketch/learner.hpp"
#include "wmsketch/topk_heap.hpp"

namespace wmsketch {

struct WmConfig {
  uint64_t k = 1024;        // total accumulators; multiple of depth
  uint32_t depth = 2;
  uint64_t seed = 42;
  double lambda = 0.0;
  Loss loss{};
  LrSchedule schedule{};
  size_t heap_capacity = 128;  // passive top-k tracking; 0 disables
  bool injective = false;      // oracle mode: bucket(row, key) = key % width
};

// Count-Sketch-compressed linear classifier. The classifier lives in the
// sketch's k accumulators; per-feature weights are recovered as the median of
// signed buckets scaled by sqrt(depth) and the global decay factor. A passive
// bounded heap tracks the heaviest recovered weights: entries refresh only
// when their feature is touched by an update.
class WmSketch final : public OnlineLearner {
 public:
  explicit WmSketch(const WmConfig& cfg);

  double margin(const SparseVector& x) const override;
  double query(feature_t feature) const override;
  // k <= heap capacity; estimates re-queried at call time, sorted by
  // |weight| desc, ties toward the smaller id.
  TopKEstimate topk(size_t k) const override;
  const char* name() const override { return "wm"; }

  // Accumulator writes performed by updates (s per touched feature).
  uint64_t touches() const { return touches_; }
  size_t heap_capacity() const { return heap_.capacity(); }

  const CountSketch& sketch() const { return cs_; }
  CountSketch& sketch_mutable() { return cs_; }
  const TopKHeap<double>& heap() const { return heap_; }
  TopKHeap<double>& heap_mutable() { return heap_; }

 protected:
  void apply_step(const std::vector<feature_t>& touched, const SparseVector& dir,
                  double eta) override;
  void rescale(double f) override;

 private:
  void offer_to_heap(feature_t id);

  CountSketch cs_;
  TopKHeap<double> heap_;
  double sqrt_s_;
  uint64_t touches_ = 0;
};

}  // namespace wmsketch
