#include "wmsketch/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wmsketch/rng.hpp"

namespace wmsketch {

namespace {

void sort_ranked(TopKEstimate& rows) {
  std::sort(rows.begin(), rows.end(), [](const WeightEntry& a, const WeightEntry& b) {
    double ma = std::abs(a.weight), mb = std::abs(b.weight);
    if (ma != mb) return ma > mb;
    return a.feature < b.feature;
  });
}

// Admission by magnitude with the shared tie rule: equal keys keep the
// smaller id.
void offer_weight(TopKHeap<double>& heap, feature_t id, double w) {
  if (w == 0.0 || heap.capacity() == 0) return;
  if (!heap.full()) {
    heap.insert(id, std::abs(w), w);
    return;
  }
  const auto& weakest = heap.weakest();
  if (TopKHeap<double>::weaker(weakest.key, weakest.id, std::abs(w), id)) {
    heap.pop_weakest();
    heap.insert(id, std::abs(w), w);
  }
}

double heap_margin(const TopKHeap<double>& heap, const SparseVector& x, double scale) {
  double m = 0.0;
  for (const auto& [id, v] : x) {
    if (const auto* e = heap.find(id)) m += v * e->value;
  }
  return scale * m;
}

TopKEstimate heap_topk(const TopKHeap<double>& heap, double scale, size_t k) {
  TopKEstimate rows;
  rows.reserve(heap.size());
  for (const auto& e : heap.entries()) {
    double w = scale * e.value;
    if (w != 0.0) rows.push_back({e.id, w});
  }
  sort_ranked(rows);
  if (rows.size() > k) rows.resize(k);
  return rows;
}

}  // namespace

DenseModel::DenseModel(const DenseConfig& cfg)
    : OnlineLearner(cfg.loss, cfg.schedule, cfg.lambda) {}

double DenseModel::margin(const SparseVector& x) const {
  double m = 0.0;
  for (const auto& [id, v] : x) {
    auto it = w_.find(id);
    if (it != w_.end()) m += v * it->second;
  }
  return scale_ * m;
}

double DenseModel::query(feature_t feature) const {
  auto it = w_.find(feature);
  return it == w_.end() ? 0.0 : scale_ * it->second;
}

TopKEstimate DenseModel::topk(size_t k) const {
  TopKEstimate rows;
  rows.reserve(w_.size());
  for (const auto& [id, w] : w_) {
    if (w != 0.0) rows.push_back({id, scale_ * w});
  }
  sort_ranked(rows);
  if (rows.size() > k) rows.resize(k);
  return rows;
}

void DenseModel::apply_step(const std::vector<feature_t>&, const SparseVector& dir,
                            double eta) {
  double c = -eta / scale_;
  for (const auto& [id, d] : dir) w_[id] += c * d;
}

void DenseModel::rescale(double f) {
  for (auto& [id, w] : w_) w *= f;
}

Truncated::Truncated(const TruncConfig& cfg)
    : OnlineLearner(cfg.loss, cfg.schedule, cfg.lambda), heap_(cfg.capacity) {}

double Truncated::margin(const SparseVector& x) const {
  return heap_margin(heap_, x, scale_);
}

double Truncated::query(feature_t feature) const {
  const auto* e = heap_.find(feature);
  return e ? scale_ * e->value : 0.0;
}

TopKEstimate Truncated::topk(size_t k) const { return heap_topk(heap_, scale_, k); }

void Truncated::apply_step(const std::vector<feature_t>&, const SparseVector& dir,
                           double eta) {
  double c = -eta / scale_;
  for (const auto& [id, d] : dir) {
    if (const auto* e = heap_.find(id)) {
      double w = e->value + c * d;
      if (w == 0.0) {
        heap_.erase(id);
      } else {
        heap_.update(id, std::abs(w), w);
      }
    } else {
      offer_weight(heap_, id, c * d);
    }
  }
}

void Truncated::rescale(double f) {
  heap_.transform_monotone([f](TopKHeap<double>::Entry& e) {
    e.key *= f;
    e.value *= f;
  });
}

ProbTruncated::ProbTruncated(const ProbTruncConfig& cfg)
    : OnlineLearner(cfg.loss, cfg.schedule, cfg.lambda),
      heap_(cfg.capacity),
      rng_(derive_seed(cfg.seed, "ptrunc")) {}

double ProbTruncated::margin(const SparseVector& x) const {
  return heap_margin(heap_, x, scale_);
}

double ProbTruncated::query(feature_t feature) const {
  const auto* e = heap_.find(feature);
  return e ? scale_ * e->value : 0.0;
}

TopKEstimate ProbTruncated::topk(size_t k) const { return heap_topk(heap_, scale_, k); }

// Reservoir key for weight w is r^(1/|w|), kept as log(r)/|w| so repeated
// renormalization cannot underflow. All transforms on it are monotone, so
// heap order matches the textbook key order.
double ProbTruncated::log_reservoir_key(double raw_weight) {
  return std::log(rng_.real_pos()) / std::abs(raw_weight);
}

void ProbTruncated::apply_step(const std::vector<feature_t>&, const SparseVector& dir,
                               double eta) {
  double c = -eta / scale_;
  for (const auto& [id, d] : dir) {
    if (const auto* e = heap_.find(id)) {
      double old_raw = e->value;
      double new_raw = old_raw + c * d;
      if (new_raw == 0.0) {
        heap_.erase(id);
        continue;
      }
      heap_.update(id, e->key * std::abs(old_raw / new_raw), new_raw);
    } else {
      double w = c * d;
      if (w == 0.0 || heap_.capacity() == 0) continue;
      double key = log_reservoir_key(w);
      if (!heap_.full()) {
        heap_.insert(id, key, w);
        continue;
      }
      const auto& weakest = heap_.weakest();
      if (TopKHeap<double>::weaker(weakest.key, weakest.id, key, id)) {
        heap_.pop_weakest();
        heap_.insert(id, key, w);
      }
    }
  }
}

void ProbTruncated::rescale(double f) {
  heap_.transform_monotone([f](TopKHeap<double>::Entry& e) {
    e.key /= f;
    e.value *= f;
  });
}

SpaceSaving::SpaceSaving(const SpaceSavingConfig& cfg)
    : OnlineLearner(cfg.loss, cfg.schedule, cfg.lambda), counts_(cfg.capacity) {}

double SpaceSaving::margin(const SparseVector& x) const {
  double m = 0.0;
  for (const auto& [id, v] : x) {
    if (const auto* e = counts_.find(id)) m += v * e->value;
  }
  return scale_ * m;
}

double SpaceSaving::query(feature_t feature) const {
  const auto* e = counts_.find(feature);
  return e ? scale_ * e->value : 0.0;
}

uint64_t SpaceSaving::count(feature_t feature) const {
  const auto* e = counts_.find(feature);
  return e ? e->key : 0;
}

TopKEstimate SpaceSaving::topk(size_t k) const {
  TopKEstimate rows;
  rows.reserve(counts_.size());
  for (const auto& e : counts_.entries()) {
    double w = scale_ * e.value;
    if (w != 0.0) rows.push_back({e.id, w});
  }
  sort_ranked(rows);
  if (rows.size() > k) rows.resize(k);
  return rows;
}

void SpaceSaving::apply_step(const std::vector<feature_t>& touched, const SparseVector& dir,
                             double eta) {
  double c = -eta / scale_;
  auto it = dir.begin();
  for (feature_t id : touched) {
    double d = 0.0;
    if (it != dir.end() && it->first == id) d = (it++)->second;
    if (const auto* e = counts_.find(id)) {
      counts_.update(id, e->key + 1, e->value + c * d);
    } else if (counts_.capacity() > 0) {
      uint64_t installed = 1;
      if (counts_.full()) {
        installed = counts_.weakest().key + 1;
        counts_.pop_weakest();
      }
      counts_.insert(id, installed, c * d);
    }
  }
}

void SpaceSaving::rescale(double f) {
  counts_.transform_monotone([f](TopKHeap<uint64_t>::Entry& e) { e.value *= f; });
}

namespace {

CountSketch make_hash_sketch(const FeatureHashingConfig& cfg) {
  if (!cfg.injective) return CountSketch(cfg.seed, cfg.width, 1);
  if (cfg.width == 0) throw std::invalid_argument("width must be positive");
  auto family = hash::HashFamily::injective(cfg.seed, 1, static_cast<uint32_t>(cfg.width));
  return CountSketch(std::move(family), cfg.width, 1);
}

}  // namespace

FeatureHashing::FeatureHashing(const FeatureHashingConfig& cfg)
    : OnlineLearner(cfg.loss, cfg.schedule, cfg.lambda), cs_(make_hash_sketch(cfg)) {}

double FeatureHashing::margin(const SparseVector& x) const {
  double m = 0.0;
  for (const auto& [id, v] : x) m += v * cs_.signed_row_sum(id);
  return scale_ * m;
}

double FeatureHashing::query(feature_t feature) const {
  return scale_ * cs_.query(feature);
}

TopKEstimate FeatureHashing::topk(size_t) const { return {}; }

void FeatureHashing::apply_step(const std::vector<feature_t>&, const SparseVector& dir,
                                double eta) {
  double c = -eta / scale_;
  for (const auto& [id, d] : dir) cs_.update(id, c * d);
}

void FeatureHashing::rescale(double f) {
  for (double& v : cs_.values()) v *= f;
}

CmFrequent::CmFrequent(const CmFrequentConfig& cfg)
    : OnlineLearner(cfg.loss, cfg.schedule, cfg.lambda),
      cm_(cfg.seed, cfg.k, cfg.depth),
      heap_(cfg.capacity) {}

double CmFrequent::margin(const SparseVector& x) const {
  double m = 0.0;
  for (const auto& [id, v] : x) {
    if (const auto* e = heap_.find(id)) m += v * e->value;
  }
  return scale_ * m;
}

double CmFrequent::query(feature_t feature) const {
  const auto* e = heap_.find(feature);
  return e ? scale_ * e->value : 0.0;
}

TopKEstimate CmFrequent::topk(size_t k) const {
  TopKEstimate rows;
  rows.reserve(heap_.size());
  for (const auto& e : heap_.entries()) {
    double w = scale_ * e.value;
    if (w != 0.0) rows.push_back({e.id, w});
  }
  sort_ranked(rows);
  if (rows.size() > k) rows.resize(k);
  return rows;
}

void CmFrequent::apply_step(const std::vector<feature_t>& touched, const SparseVector& dir,
                            double eta) {
  double c = -eta / scale_;
  auto it = dir.begin();
  for (feature_t id : touched) {
    double d = 0.0;
    if (it != dir.end() && it->first == id) d = (it++)->second;
    cm_.update(id, 1.0);
    auto est = static_cast<uint64_t>(cm_.query(id));
    if (const auto* e = heap_.find(id)) {
      heap_.update(id, est, e->value + c * d);
    } else if (heap_.capacity() > 0) {
      if (!heap_.full()) {
        heap_.insert(id, est, c * d);
      } else if (est > heap_.weakest().key) {
        heap_.pop_weakest();
        heap_.insert(id, est, c * d);
      }
    }
  }
}

void CmFrequent::rescale(double f) {
  heap_.transform_monotone([f](TopKHeap<uint64_t>::Entry& e) { e.value *= f; });
}

}  // namespace wmsketch
