#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "wmsketch/countsketch.hpp"
#include "wmsketch/learner.hpp"
#include "wmsketch/rng.hpp"
#include "wmsketch/types.hpp"

namespace wmsketch::apps {

struct RiskCounts {
  uint64_t n_x1_y1 = 0;
  uint64_t n_x1 = 0;
  uint64_t n_x0_y1 = 0;
  uint64_t n_x0 = 0;
};

// p(y=1|x=1) / p(y=1|x=0). No x=1 observations: NaN. Zero denominator
// (n_x0 = 0 or n_x0_y1 = 0): +inf.
double relative_risk(const RiskCounts& c);

template <typename T>
class Reservoir {
 public:
  explicit Reservoir(size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("reservoir capacity must be positive");
    items_.reserve(capacity);
  }

  void add(const T& item, SplitMix64& rng) {
    ++seen_;
    if (items_.size() < capacity_) {
      items_.push_back(item);
      return;
    }
    uint64_t j = rng.below(seen_);
    if (j < capacity_) items_[static_cast<size_t>(j)] = item;
  }

  const T& sample(SplitMix64& rng) const {
    if (items_.empty()) throw std::logic_error("sample from empty reservoir");
    return items_[static_cast<size_t>(rng.below(items_.size()))];
  }

  size_t size() const { return items_.size(); }
  size_t capacity() const { return capacity_; }
  uint64_t seen() const { return seen_; }
  const std::vector<T>& items() const { return items_; }

 private:
  size_t capacity_;
  uint64_t seen_ = 0;
  std::vector<T> items_;
};

struct AttributedEvent {
  std::vector<feature_t> attributes;
  int label = 1;  // +1 = outlier
};

struct ExplainRow {
  feature_t feature = 0;
  double weight = 0.0;
  double risk = 0.0;
  double log_risk = 0.0;
};

struct ExplainResult {
  std::vector<ExplainRow> top;           // by |weight| desc
  double pearson = 0.0;                  // weight vs log risk, finite rows only
  uint64_t examples = 0;                 // 1-sparse training steps
};

// Each event becomes one 1-sparse example per attribute, labeled with the
// event's outlier flag. Risks come from exact full counts kept alongside the
// budgeted learner.
ExplainResult explain_stream(const std::vector<AttributedEvent>& events,
                             const LearnerSpec& spec, size_t k);

// Items whose exact occurrence ratio between the streams, in either
// direction, meets phi. One-sided items (count zero in the other stream)
// always qualify. Sorted ascending by id.
std::vector<feature_t> ratio_truth(const std::vector<feature_t>& a,
                                   const std::vector<feature_t>& b, double phi);

// |detected ∩ truth| / |truth|; vacuously 1 when truth is empty.
double recall(const std::vector<feature_t>& detected,
              const std::vector<feature_t>& truth);

struct DeltoidConfig {
  LearnerSpec learner;
  double phi = 5.0;
  size_t k = 128;  // retrieval size
};

struct DeltoidResult {
  std::vector<WeightEntry> top;
  std::vector<feature_t> detected;  // ids of top, ascending
  std::vector<feature_t> truth;
  double recall = 1.0;
  uint64_t steps = 0;
};

// Stream A items train as (e_i, +1), stream B items as (e_i, -1),
// interleaved 1:1 with joint two-example steps so that swapping the streams
// negates the trajectory exactly. Tail of the longer stream runs alone.
DeltoidResult deltoid_detect(const std::vector<feature_t>& a,
                             const std::vector<feature_t>& b,
                             const DeltoidConfig& cfg);

// Ratio estimation from a pair of count-min sketches. Candidates are
// supplied at query time; retrieval is top-k by estimated ratio.
class CmPairDetector {
 public:
  CmPairDetector(uint64_t seed, uint64_t k, uint32_t depth);

  void observe_a(feature_t item) { a_.update(item, 1.0); }
  void observe_b(feature_t item) { b_.update(item, 1.0); }

  // max(estA/estB, estB/estA); one side zero and the other positive: +inf;
  // both zero: 0.
  double ratio(feature_t item) const;
  std::vector<feature_t> top_ratio(const std::vector<feature_t>& candidates,
                                   size_t k) const;

  const CountMin& a() const { return a_; }
  const CountMin& b() const { return b_; }

 private:
  CountMin a_;
  CountMin b_;
};

struct PmiConfig {
  uint32_t window = 6;      // >= 2
  uint32_t negatives = 5;   // >= 1
  size_t reservoir = 4000;
  size_t k = 64;            // pairs reported
  LearnerSpec learner;      // defaulted to awm, heap 1024, depth 1 by pmi_stream
  uint64_t seed = 42;
};

struct PmiPair {
  std::string u;
  std::string v;
  feature_t pair = 0;
  double weight = 0.0;  // raw learned weight
  double pmi = 0.0;     // weight + log(negatives)
};

struct PmiResult {
  std::vector<PmiPair> top;
  uint64_t positives = 0;
  uint64_t steps = 0;
};

// Token u then v within a window, joined with a unit separator and hashed.
feature_t pair_feature(const std::string& u, const std::string& v);

// Slides a window over the tokens; every (earlier, newest) pair in the
// window is a positive example, followed by `negatives` reservoir-product
// pairs as negatives. Weights read as PMI after adding log(negatives), which
// cancels the negative-sampling rate.
PmiResult pmi_stream(const std::vector<std::string>& tokens, const PmiConfig& cfg);

}  // namespace wmsketch::apps
