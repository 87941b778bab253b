#include "wmsketch/awm_sketch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wmsketch {

namespace {

CountSketch make_sketch(const AwmConfig& cfg) {
  if (!cfg.injective) return CountSketch(cfg.seed, cfg.k, cfg.depth);
  if (cfg.depth == 0 || cfg.k == 0 || cfg.k % cfg.depth != 0)
    throw std::invalid_argument("k must be a positive multiple of depth");
  auto family = hash::HashFamily::injective(cfg.seed, cfg.depth,
                                            static_cast<uint32_t>(cfg.k / cfg.depth));
  return CountSketch(std::move(family), cfg.k, cfg.depth);
}

}  // namespace

AwmSketch::AwmSketch(const AwmConfig& cfg)
    : OnlineLearner(cfg.loss, cfg.schedule, cfg.lambda),
      cs_(make_sketch(cfg)),
      active_(cfg.capacity),
      sqrt_s_(std::sqrt(static_cast<double>(cfg.depth))) {}

double AwmSketch::margin(const SparseVector& x) const {
  double m = 0.0;
  for (const auto& [id, v] : x) {
    if (const auto* e = active_.find(id)) {
      m += v * e->value;
    } else {
      m += v * cs_.signed_row_sum(id) / sqrt_s_;
    }
  }
  return scale_ * m;
}

double AwmSketch::query(feature_t feature) const {
  if (const auto* e = active_.find(feature)) return scale_ * e->value;
  return scale_ * sqrt_s_ * cs_.query(feature);
}

TopKEstimate AwmSketch::topk(size_t k) const {
  if (k > active_.capacity()) throw std::invalid_argument("k exceeds heap capacity");
  TopKEstimate rows;
  rows.reserve(active_.size());
  for (const auto& e : active_.entries()) {
    double w = scale_ * e.value;
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

void AwmSketch::apply_step(const std::vector<feature_t>& touched, const SparseVector& dir,
                           double eta) {
  double c = -eta / scale_;

  // Exact updates for features already in the active set; everything else is
  // collected with its gradient for candidate evaluation. Membership is
  // frozen here so a feature evicted mid-step is not stepped twice.
  std::vector<std::pair<feature_t, double>> outside;
  outside.reserve(touched.size());
  auto it = dir.begin();
  for (feature_t id : touched) {
    double d = 0.0;
    if (it != dir.end() && it->first == id) d = (it++)->second;
    if (const auto* e = active_.find(id)) {
      if (d != 0.0) {
        double w = e->value + c * d;
        active_.update(id, std::abs(w), w);
      }
    } else {
      outside.emplace_back(id, d);
    }
  }

  for (const auto& [id, d] : outside) {
    double cand = sqrt_s_ * cs_.query(id) + c * d;
    touches_ += cs_.depth();
    if (!active_.full()) {
      if (cand != 0.0) {
        active_.insert(id, std::abs(cand), cand);
      } else if (d != 0.0) {
        cs_.update(id, c * d / sqrt_s_);
      }
      continue;
    }
    if (active_.capacity() > 0 && std::abs(cand) > active_.weakest().key) {
      pending_.emplace_back(active_.weakest().id, active_.weakest().value);
      active_.pop_weakest();
      active_.insert(id, std::abs(cand), cand);
      continue;
    }
    if (d != 0.0) cs_.update(id, c * d / sqrt_s_);
  }

  // Evicted weights flow back into the sketch only after every gradient
  // write of the step has landed, so the residual is measured against the
  // fully-updated sketch.
  for (const auto& [id, raw] : pending_) {
    double delta = (raw - sqrt_s_ * cs_.query(id)) / sqrt_s_;
    if (delta != 0.0) cs_.update(id, delta);
  }
  pending_.clear();
}

void AwmSketch::rescale(double f) {
  for (double& v : cs_.values()) v *= f;
  active_.transform_monotone([f](TopKHeap<double>::Entry& e) {
    e.key *= f;
    e.value *= f;
  });
}

}  // namespace wmsketch
