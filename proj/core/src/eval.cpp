#include "wmsketch/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "wmsketch/model.hpp"

namespace wmsketch::eval {

uint64_t memory_cost(const MethodConfig& cfg, const MemoryCostModel& m) {
  uint64_t entry = m.bytes_per_id + m.bytes_per_weight;
  uint64_t entry_aux = entry + m.bytes_per_aux;
  uint64_t cells = cfg.width * cfg.depth * m.bytes_per_weight;
  switch (cfg.method) {
    case Method::trunc: return cfg.heap * entry;
    case Method::ptrunc: return cfg.heap * entry_aux;
    case Method::ss: return cfg.heap * entry_aux;
    case Method::hash: return cells;
    case Method::wm: return cells + cfg.heap * entry;
    case Method::awm: return cells + cfg.heap * entry;
    case Method::cmff: return cells + cfg.heap * entry_aux;
    case Method::dense: return 0;
  }
  throw std::invalid_argument("bad method enum");
}

namespace {

std::vector<uint64_t> pow2_range(uint64_t lo, uint64_t hi) {
  std::vector<uint64_t> out;
  for (uint64_t v = 1; v <= hi && v != 0; v *= 2) {
    if (v >= lo) out.push_back(v);
  }
  return out;
}

uint64_t floor_pow2(uint64_t v) {
  if (v == 0) return 0;
  uint64_t p = 1;
  while (p <= v / 2) p *= 2;
  return p;
}

}  // namespace

std::vector<MethodConfig> enumerate_configs(Method method, uint64_t budget_bytes,
                                            const GridSpec& grid) {
  if (budget_bytes == 0) throw std::invalid_argument("budget must be positive");
  std::vector<MethodConfig> out;
  auto consider = [&](size_t heap, uint64_t width, uint32_t depth) {
    MethodConfig c{method, heap, width, depth, budget_bytes};
    if (memory_cost(c) <= budget_bytes) out.push_back(c);
  };
  switch (method) {
    case Method::trunc:
    case Method::ptrunc:
    case Method::ss:
      for (uint64_t h : pow2_range(grid.heap_min, grid.heap_max))
        consider(static_cast<size_t>(h), 0, 0);
      break;
    case Method::hash:
      for (uint64_t w : pow2_range(grid.width_min, grid.width_max)) consider(0, w, 1);
      break;
    case Method::wm:
    case Method::awm:
    case Method::cmff:
      for (uint64_t h : pow2_range(grid.heap_min, grid.heap_max))
        for (uint64_t w : pow2_range(grid.width_min, grid.width_max))
          for (uint32_t s = 1; s <= grid.depth_max; ++s)
            consider(static_cast<size_t>(h), w, s);
      break;
    case Method::dense:
      break;
  }
  std::sort(out.begin(), out.end(), [](const MethodConfig& a, const MethodConfig& b) {
    uint64_t ca = memory_cost(a), cb = memory_cost(b);
    if (ca != cb) return ca > cb;
    if (a.heap != b.heap) return a.heap < b.heap;
    if (a.width != b.width) return a.width < b.width;
    return a.depth < b.depth;
  });
  return out;
}

MethodConfig suggest_config(Method method, uint64_t budget_bytes) {
  if (budget_bytes == 0) throw std::invalid_argument("budget must be positive");
  MethodConfig c{method, 0, 0, 0, budget_bytes};
  switch (method) {
    case Method::trunc:
      c.heap = static_cast<size_t>(budget_bytes / 8);
      break;
    case Method::ptrunc:
    case Method::ss:
      c.heap = static_cast<size_t>(budget_bytes / 12);
      break;
    case Method::hash:
      c.width = budget_bytes / 4;
      c.depth = 1;
      break;
    case Method::awm: {
      c.heap = static_cast<size_t>(floor_pow2(budget_bytes / 16));
      c.width = floor_pow2((budget_bytes - c.heap * 8) / 4);
      c.depth = 1;
      break;
    }
    case Method::wm: {
      c.heap = static_cast<size_t>(std::min<uint64_t>(128, floor_pow2(budget_bytes / 16)));
      uint64_t rest = budget_bytes - c.heap * 8;
      c.width = std::min<uint64_t>(budget_bytes >= 32768 ? 256 : 128, floor_pow2(rest / 4));
      if (c.width == 0) break;
      c.depth = static_cast<uint32_t>(std::max<uint64_t>(1, rest / (4 * c.width)));
      if (c.depth > 31) c.depth = 31;
      break;
    }
    case Method::cmff: {
      c.heap = static_cast<size_t>(floor_pow2(budget_bytes / 24));
      c.depth = 2;
      c.width = floor_pow2((budget_bytes - c.heap * 12) / 8);
      break;
    }
    case Method::dense:
      return c;
  }
  bool needs_heap = method == Method::trunc || method == Method::ptrunc || method == Method::ss;
  bool needs_width = method == Method::hash || method == Method::wm || method == Method::awm ||
                     method == Method::cmff;
  if ((needs_heap && c.heap == 0) || (needs_width && c.width == 0))
    throw std::invalid_argument("budget too small for method");
  return c;
}

std::vector<WeightEntry> true_topk(const std::unordered_map<feature_t, double>& w, size_t k) {
  std::vector<WeightEntry> rows;
  rows.reserve(w.size());
  for (const auto& [id, wt] : w) {
    if (wt != 0.0) rows.push_back({id, wt});
  }
  std::sort(rows.begin(), rows.end(), [](const WeightEntry& a, const WeightEntry& b) {
    double ma = std::abs(a.weight), mb = std::abs(b.weight);
    if (ma != mb) return ma > mb;
    return a.feature < b.feature;
  });
  if (rows.size() > k) rows.resize(k);
  return rows;
}

double rel_err(const TopKEstimate& estimate,
               const std::unordered_map<feature_t, double>& w_star, size_t k) {
  std::unordered_set<feature_t> star_ids;
  for (const auto& e : true_topk(w_star, k)) star_ids.insert(e.feature);

  double denom2 = 0.0;
  for (const auto& [id, w] : w_star) {
    if (!star_ids.count(id)) denom2 += w * w;
  }

  std::unordered_map<feature_t, double> est;
  for (const auto& e : estimate) {
    if (est.size() == k) break;
    est.emplace(e.feature, e.weight);
  }
  double numer2 = 0.0;
  for (const auto& [id, w] : est) {
    auto it = w_star.find(id);
    double truth = it == w_star.end() ? 0.0 : it->second;
    numer2 += (w - truth) * (w - truth);
  }
  for (const auto& [id, truth] : w_star) {
    if (!est.count(id)) numer2 += truth * truth;
  }

  if (denom2 == 0.0) {
    return numer2 == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  return std::sqrt(numer2 / denom2);
}

double OnlineStats::error_rate() const { return online_error_rate(mistakes, examples); }

double online_error_rate(uint64_t mistakes, uint64_t examples) {
  if (examples == 0) throw std::invalid_argument("error rate needs at least one example");
  if (mistakes > examples) throw std::invalid_argument("more mistakes than examples");
  return static_cast<double>(mistakes) / static_cast<double>(examples);
}

OnlineStats run_online(OnlineLearner& learner, const std::vector<LabeledExample>& stream) {
  if (stream.empty()) throw std::invalid_argument("empty stream");
  OnlineStats stats;
  for (const auto& ex : stream) {
    int predicted = predict_label(learner.margin(ex.x));
    if (predicted != ex.y) ++stats.mistakes;
    learner.update(ex.x, ex.y);
    ++stats.examples;
  }
  return stats;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("length mismatch");
  size_t n = a.size();
  if (n < 2) throw std::invalid_argument("need at least two points");
  double ma = 0.0, mb = 0.0;
  for (size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (size_t i = 0; i < n; ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) throw std::invalid_argument("zero variance");
  return cov / std::sqrt(va * vb);
}

}  // namespace wmsketch::eval
