#pragma once

#include <cstdint>
#include <unordered_map>

#include "wmsketch/countsketch.hpp"
#include "wmsketch/learner.hpp"
#include "wmsketch/rng.hpp"
#include "wmsketch/topk_heap.hpp"

namespace wmsketch {

struct DenseConfig {
  double lambda = 0.0;
  Loss loss{};
  LrSchedule schedule{};
};

// Uncompressed OGD over a hash map. Reference model for recovery error.
class DenseModel final : public OnlineLearner {
 public:
  explicit DenseModel(const DenseConfig& cfg);

  double margin(const SparseVector& x) const override;
  double query(feature_t feature) const override;
  TopKEstimate topk(size_t k) const override;
  const char* name() const override { return "dense"; }

  size_t size() const { return w_.size(); }
  const std::unordered_map<feature_t, double>& raw_weights() const { return w_; }
  std::unordered_map<feature_t, double>& raw_weights_mutable() { return w_; }

 protected:
  void apply_step(const std::vector<feature_t>& touched, const SparseVector& dir,
                  double eta) override;
  void rescale(double f) override;

 private:
  std::unordered_map<feature_t, double> w_;
};

struct TruncConfig {
  size_t capacity = 128;
  double lambda = 0.0;
  Loss loss{};
  LrSchedule schedule{};
};

// Keep only the K largest weights by magnitude; everything truncated is gone
// for good. Ties go to the smaller feature id.
class Truncated final : public OnlineLearner {
 public:
  explicit Truncated(const TruncConfig& cfg);

  double margin(const SparseVector& x) const override;
  double query(feature_t feature) const override;
  TopKEstimate topk(size_t k) const override;
  const char* name() const override { return "trunc"; }

  size_t capacity() const { return heap_.capacity(); }
  const TopKHeap<double>& heap() const { return heap_; }
  TopKHeap<double>& heap_mutable() { return heap_; }

 protected:
  void apply_step(const std::vector<feature_t>& touched, const SparseVector& dir,
                  double eta) override;
  void rescale(double f) override;

 private:
  TopKHeap<double> heap_;  // key = |raw weight|, value = raw weight
};

struct ProbTruncConfig {
  size_t capacity = 128;
  double lambda = 0.0;
  Loss loss{};
  LrSchedule schedule{};
  uint64_t seed = 42;
};

// Probabilistic truncation: weighted reservoir keyed by |weight|, so a
// truncated feature survives with probability proportional to its share of
// the magnitude mass. Reservoir keys are kept in log space.
class ProbTruncated final : public OnlineLearner {
 public:
  explicit ProbTruncated(const ProbTruncConfig& cfg);

  double margin(const SparseVector& x) const override;
  double query(feature_t feature) const override;
  TopKEstimate topk(size_t k) const override;
  const char* name() const override { return "ptrunc"; }

  size_t capacity() const { return heap_.capacity(); }
  const TopKHeap<double>& heap() const { return heap_; }

 protected:
  void apply_step(const std::vector<feature_t>& touched, const SparseVector& dir,
                  double eta) override;
  void rescale(double f) override;

 private:
  double log_reservoir_key(double raw_weight);

  TopKHeap<double> heap_;  // key = log(r)/|raw|, value = raw weight
  SplitMix64 rng_;
};

struct SpaceSavingConfig {
  size_t capacity = 128;
  double lambda = 0.0;
  Loss loss{};
  LrSchedule schedule{};
};

// Space-saving heavy hitters repurposed as a learner: membership is decided
// by occurrence counts, and only members carry weights. An evicted feature's
// weight is discarded; the newcomer inherits count min+1 and starts from the
// fresh gradient.
class SpaceSaving final : public OnlineLearner {
 public:
  explicit SpaceSaving(const SpaceSavingConfig& cfg);

  double margin(const SparseVector& x) const override;
  double query(feature_t feature) const override;
  TopKEstimate topk(size_t k) const override;
  const char* name() const override { return "ss"; }

  size_t capacity() const { return counts_.capacity(); }
  uint64_t count(feature_t feature) const;
  const TopKHeap<uint64_t>& counts() const { return counts_; }

 protected:
  void apply_step(const std::vector<feature_t>& touched, const SparseVector& dir,
                  double eta) override;
  void rescale(double f) override;

 private:
  TopKHeap<uint64_t> counts_;  // key = occurrence count, value = raw weight
};

struct FeatureHashingConfig {
  uint64_t width = 1024;
  uint64_t seed = 42;
  double lambda = 0.0;
  Loss loss{};
  LrSchedule schedule{};
  bool injective = false;
};

// Signed feature hashing: a depth-1 sketch queried without any median
// correction. Cannot enumerate heavy features, so topk is always empty.
class FeatureHashing final : public OnlineLearner {
 public:
  explicit FeatureHashing(const FeatureHashingConfig& cfg);

  double margin(const SparseVector& x) const override;
  double query(feature_t feature) const override;
  TopKEstimate topk(size_t k) const override;
  const char* name() const override { return "hash"; }

  uint64_t width() const { return cs_.k(); }
  const CountSketch& sketch() const { return cs_; }

 protected:
  void apply_step(const std::vector<feature_t>& touched, const SparseVector& dir,
                  double eta) override;
  void rescale(double f) override;

 private:
  CountSketch cs_;
};

struct CmFrequentConfig {
  size_t capacity = 128;
  uint64_t k = 256;  // count-min accumulators; multiple of depth
  uint32_t depth = 2;
  uint64_t seed = 42;
  double lambda = 0.0;
  Loss loss{};
  LrSchedule schedule{};
};

// Frequency-only strawman: count-min tracks occurrence estimates, a heap
// keeps weights for the features the count-min currently calls frequent.
// Learns nothing about weight magnitude below the heap.
class CmFrequent final : public OnlineLearner {
 public:
  explicit CmFrequent(const CmFrequentConfig& cfg);

  double margin(const SparseVector& x) const override;
  double query(feature_t feature) const override;
  TopKEstimate topk(size_t k) const override;
  const char* name() const override { return "cmff"; }

  size_t capacity() const { return heap_.capacity(); }
  const CountMin& counter() const { return cm_; }

 protected:
  void apply_step(const std::vector<feature_t>& touched, const SparseVector& dir,
                  double eta) override;
  void rescale(double f) override;

 private:
  CountMin cm_;
  TopKHeap<uint64_t> heap_;  // key = estimated count, value = raw weight
};

}  // namespace wmsketch
