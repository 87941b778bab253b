#include "wmsketch/wm_sketch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wmsketch {

namespace {

CountSketch make_sketch(const WmConfig& cfg) {
  if (!cfg.injective) return CountSketch(cfg.seed, cfg.k, cfg.depth);
  if (cfg.depth == 0 || cfg.k == 0 || cfg.k % cfg.depth != 0)
    throw std::invalid_argument("k must be a positive multiple of depth");
  auto family = hash::HashFamily::injective(cfg.seed, cfg.depth,
                                            static_cast<uint32_t>(cfg.k / cfg.depth));
  return CountSketch(std::move(family), cfg.k, cfg.depth);
}

}  // namespace

WmSketch::WmSketch(const WmConfig& cfg)
    : OnlineLearner(cfg.loss, cfg.schedule, cfg.lambda),
      cs_(make_sketch(cfg)),
      heap_(cfg.heap_capacity),
      sqrt_s_(std::sqrt(static_cast<double>(cfg.depth))) {}

double WmSketch::margin(const SparseVector& x) const {
  double m = 0.0;
  for (const auto& [id, v] : x) m += v * cs_.signed_row_sum(id);
  return scale_ / sqrt_s_ * m;
}

double WmSketch::query(feature_t feature) const {
  return scale_ * sqrt_s_ * cs_.query(feature);
}

TopKEstimate WmSketch::topk(size_t k) const {
  if (k > heap_.capacity()) throw std::invalid_argument("k exceeds heap capacity");
  TopKEstimate rows;
  rows.reserve(heap_.size());
  for (const auto& e : heap_.entries()) {
    double w = query(e.id);
    if (w != 0.0) rows.push_back({e.id, w});
  }
  std::sort(rows.begin(), rows.end(), [](const WeightEntry& a, const WeightEntry& b) {
    double ma = std::abs(a.weight), mb = std::abs(b.weight);
    if (ma != mb) return ma > mb;
    return a.feature < b.feature;
  });
  if (rows.size() > k) rows.resize(k);
  return rows;
}

void WmSketch::apply_step(const std::vector<feature_t>& touched, const SparseVector& dir,
                          double eta) {
  double c = -eta / (scale_ * sqrt_s_);
  auto it = dir.begin();
  for (feature_t id : touched) {
    double d = 0.0;
    if (it != dir.end() && it->first == id) d = (it++)->second;
    if (d != 0.0) cs_.update(id, c * d);
    touches_ += cs_.depth();
    offer_to_heap(id);
  }
}

void WmSketch::rescale(double f) {
  for (double& v : cs_.values()) v *= f;
  heap_.transform_monotone([f](TopKHeap<double>::Entry& e) {
    e.key *= f;
    e.value *= f;
  });
}

void WmSketch::offer_to_heap(feature_t id) {
  if (heap_.capacity() == 0) return;
  double w = sqrt_s_ * cs_.query(id);
  if (heap_.contains(id)) {
    if (w == 0.0) {
      heap_.erase(id);
    } else {
      heap_.update(id, std::abs(w), w);
    }
    return;
  }
  if (w == 0.0) return;
  if (!heap_.full()) {
    heap_.insert(id, std::abs(w), w);
    return;
  }
  const auto& weakest = heap_.weakest();
  if (TopKHeap<double>::weaker(weakest.key, weakest.id, std::abs(w), id)) {
    heap_.pop_weakest();
    heap_.insert(id, std::abs(w), w);
  }
}

}  // namespace wmsketch
