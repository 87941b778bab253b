#pragma once

#include <cstdint>

#include "wmsketch/countsketch.hpp"
#include "wmsketch/learner.hpp"
#include "wmsketch/topk_heap.hpp"

namespace wmsketch {

struct AwmConfig {
  size_t capacity = 128;    // active set size |S|
  uint64_t k = 256;         // sketch accumulators; multiple of depth
  uint32_t depth = 1;
  uint64_t seed = 42;
  double lambda = 0.0;
  Loss loss{};
  LrSchedule schedule{};
  bool injective = false;
};

// Active-set variant: a bounded heap holds exact weights for the heaviest
// features; everything else lives in a lazily-maintained sketch. A non-heap
// feature whose candidate weight beats the heap minimum is promoted, and the
// evicted feature's weight minus its current sketch estimate is written back
// so the sketch keeps its mass. Eviction write-backs are deferred to the end
// of the step, after all gradient writes.
class AwmSketch final : public OnlineLearner {
 public:
  explicit AwmSketch(const AwmConfig& cfg);

  double margin(const SparseVector& x) const override;
  // Heap weight when tracked, sketch median estimate otherwise.
  double query(feature_t feature) const override;
  // k <= capacity; exact heap weights sorted by |weight| desc, ties toward
  // the smaller id.
  TopKEstimate topk(size_t k) const override;
  const char* name() const override { return "awm"; }

  uint64_t touches() const { return touches_; }
  size_t capacity() const { return active_.capacity(); }
  bool tracked(feature_t feature) const { return active_.contains(feature); }

  const CountSketch& sketch() const { return cs_; }
  CountSketch& sketch_mutable() { return cs_; }
  const TopKHeap<double>& active_set() const { return active_; }
  TopKHeap<double>& active_set_mutable() { return active_; }

 protected:
  void apply_step(const std::vector<feature_t>& touched, const SparseVector& dir,
                  double eta) override;
  void rescale(double f) override;

 private:
  CountSketch cs_;
  TopKHeap<double> active_;  // key = |raw weight|, value = raw weight
  std::vector<std::pair<feature_t, double>> pending_;  // eviction write-backs
  double sqrt_s_;
  uint64_t touches_ = 0;
};

}  // namespace wmsketch
