#include "wmsketch/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "wmsketch/rng.hpp"

namespace wmsketch::io {

namespace {

void validate(const SyntheticSpec& spec) {
  if (spec.dim < 1) throw std::invalid_argument("dim must be at least 1");
  if (spec.sparsity < 1 || spec.sparsity > spec.dim)
    throw std::invalid_argument("sparsity must be in [1, dim]");
  if (spec.heavy > spec.dim) throw std::invalid_argument("heavy must be at most dim");
  if (!(spec.heavy_min > 0.0) || spec.heavy_min > spec.heavy_max)
    throw std::invalid_argument("need 0 < heavy_min <= heavy_max");
  if (!(spec.noise >= 0.0 && spec.noise < 0.5)) throw std::invalid_argument("noise must be in [0, 0.5)");
  if (spec.zipf < 0.0) throw std::invalid_argument("zipf must be nonnegative");
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  validate(spec);
  SyntheticData data;

  SplitMix64 wrng(derive_seed(spec.seed, "synthetic/weights"));
  for (uint32_t i = 0; i < spec.heavy; ++i) {
    double mag = spec.heavy_min + (spec.heavy_max - spec.heavy_min) * wrng.real();
    double sign = (wrng.next() & 1) ? 1.0 : -1.0;
    data.w_true.emplace(static_cast<feature_t>(i), sign * mag);
  }

  std::vector<double> cum;
  if (spec.zipf > 0.0) {
    cum.resize(spec.dim);
    double total = 0.0;
    for (uint64_t i = 0; i < spec.dim; ++i) {
      total += std::pow(static_cast<double>(i + 1), -spec.zipf);
      cum[i] = total;
    }
  }

  SplitMix64 xrng(derive_seed(spec.seed, "synthetic/examples"));
  SplitMix64 nrng(derive_seed(spec.seed, "synthetic/noise"));
  auto draw_id = [&]() -> feature_t {
    if (cum.empty()) return static_cast<feature_t>(xrng.below(spec.dim));
    double u = xrng.real() * cum.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    if (it == cum.end()) --it;
    return static_cast<feature_t>(it - cum.begin());
  };

  data.stream.reserve(spec.steps);
  std::unordered_set<feature_t> used;
  std::vector<std::pair<feature_t, double>> entries;
  for (uint64_t t = 0; t < spec.steps; ++t) {
    used.clear();
    entries.clear();
    while (used.size() < spec.sparsity) {
      feature_t id = draw_id();
      if (used.insert(id).second) entries.emplace_back(id, xrng.real_pos());
    }
    double margin = 0.0;
    for (const auto& [id, v] : entries) {
      auto it = data.w_true.find(id);
      if (it != data.w_true.end()) margin += it->second * v;
    }
    int y = margin >= 0.0 ? 1 : -1;
    if (spec.noise > 0.0 && nrng.real() < spec.noise) y = -y;
    data.stream.push_back({SparseVector::from_pairs(entries), y});
  }
  return data;
}

}  // namespace wmsketch::io
