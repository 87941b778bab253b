#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "wmsketch/apps.hpp"
#include "wmsketch/rng.hpp"
#include "wmsketch/types.hpp"

namespace fixtures {

using wmsketch::feature_t;
using wmsketch::LabeledExample;
using wmsketch::SparseVector;
using wmsketch::SplitMix64;

// Token stream of i.i.d. 2-token blocks. Unigram law: A, B at 0.1; C, D at
// 0.2; four fillers at 0.1. With reroute on, block pairs (A,D) become (A,B)
// and (C,B) become (C,D); both marginals are preserved and sliding window-2
// pairs are a 50/50 mix of block pairs and independent cross-block pairs, so
// the window co-occurrence of (A,B) is exactly 2 p(A) p(B): PMI = log 2. With
// reroute off all pairs are independent and every PMI is 0.
inline std::vector<std::string> pmi_tokens(uint64_t seed, size_t blocks, bool reroute) {
  static const std::vector<std::string> vocab = {"A", "B", "C", "D", "f0", "f1", "f2", "f3"};
  static const double cum[8] = {0.1, 0.2, 0.4, 0.6, 0.7, 0.8, 0.9, 1.0};
  SplitMix64 rng(wmsketch::derive_seed(seed, "fixtures/pmi"));
  auto draw = [&]() -> size_t {
    double u = rng.real();
    for (size_t i = 0; i < 8; ++i) {
      if (u < cum[i]) return i;
    }
    return 7;
  };
  std::vector<std::string> tokens;
  tokens.reserve(2 * blocks);
  for (size_t b = 0; b < blocks; ++b) {
    size_t t1 = draw(), t2 = draw();
    if (reroute) {
      if (t1 == 0 && t2 == 3) t2 = 1;       // (A,D) -> (A,B)
      else if (t1 == 2 && t2 == 1) t2 = 3;  // (C,B) -> (C,D)
    }
    tokens.push_back(vocab[t1]);
    tokens.push_back(vocab[t2]);
  }
  return tokens;
}

struct RecoveryData {
  std::vector<LabeledExample> stream;
  std::unordered_map<feature_t, double> w_true;
};

// Heavy-tailed classification stream: d = 2^16 with zipf(1.0) feature
// popularity, 50 true weights planted at popularity ranks 1, 4, 9, ..., 2500
// (popular through mid-band), magnitudes decaying by rank with alternating
// signs, sparsity 10, 5% label noise.
inline RecoveryData recovery_stream(uint64_t seed, uint64_t steps = 100000) {
  constexpr uint64_t kDim = 1ull << 16;
  constexpr uint32_t kSparsity = 10;
  constexpr double kNoise = 0.05;

  RecoveryData data;
  for (uint32_t j = 1; j <= 50; ++j) {
    double mag = 3.0 * std::pow(0.96, j - 1);
    data.w_true.emplace(j * j, (j % 2 == 1) ? mag : -mag);
  }

  static const std::vector<double>& cum = [] {
    static std::vector<double> table(kDim);
    double total = 0.0;
    for (uint64_t i = 0; i < kDim; ++i) {
      total += 1.0 / static_cast<double>(i + 1);
      table[i] = total;
    }
    return table;
  }();

  SplitMix64 xrng(wmsketch::derive_seed(seed, "fixtures/recovery"));
  SplitMix64 nrng(wmsketch::derive_seed(seed, "fixtures/recovery-noise"));
  auto draw_id = [&]() -> feature_t {
    double u = xrng.real() * cum.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    if (it == cum.end()) --it;
    return static_cast<feature_t>(it - cum.begin());
  };

  data.stream.reserve(steps);
  std::vector<SparseVector::Entry> entries;
  for (uint64_t t = 0; t < steps; ++t) {
    entries.clear();
    while (entries.size() < kSparsity) {
      feature_t id = draw_id();
      bool dup = false;
      for (const auto& [seen, v] : entries) dup |= seen == id;
      if (!dup) entries.emplace_back(id, xrng.real_pos());
    }
    double m = 0.0;
    for (const auto& [id, v] : entries) {
      auto it = data.w_true.find(id);
      if (it != data.w_true.end()) m += it->second * v;
    }
    int y = m >= 0.0 ? 1 : -1;
    if (nrng.real() < kNoise) y = -y;
    data.stream.push_back({SparseVector::from_pairs(entries), y});
  }
  return data;
}

struct DeltoidData {
  std::vector<feature_t> a;
  std::vector<feature_t> b;
  std::vector<feature_t> planted;  // realized-count truth should equal this
};

// 16 planted ratio-10 items (8 heavy in A, 8 heavy in B) over a 256-item
// uniform noise floor dense enough that no noise item drifts near the
// threshold: per-stream expected counts are 250 vs 25 for planted items and
// ~70 for noise.
inline DeltoidData deltoid_streams(uint64_t seed, uint64_t steps = 20000) {
  DeltoidData data;
  for (feature_t i = 0; i < 16; ++i) data.planted.push_back(i);
  constexpr double kHeavy = 0.0125, kLight = 0.00125;
  constexpr size_t kNoise = 256;
  const double noise_mass = 1.0 - 8 * kHeavy - 8 * kLight;

  auto build = [&](SplitMix64& rng, bool a_side) {
    std::vector<feature_t> out;
    out.reserve(steps);
    for (uint64_t t = 0; t < steps; ++t) {
      double u = rng.real();
      if (u < 8 * kHeavy) {
        auto id = static_cast<feature_t>(u / kHeavy);
        if (id > 7) id = 7;
        out.push_back(a_side ? id : id + 8);
      } else if (u < 8 * kHeavy + 8 * kLight) {
        auto id = static_cast<feature_t>((u - 8 * kHeavy) / kLight);
        if (id > 7) id = 7;
        out.push_back(a_side ? id + 8 : id);
      } else {
        double span = (u - 8 * kHeavy - 8 * kLight) / noise_mass;
        auto slot = static_cast<feature_t>(span * kNoise);
        if (slot >= kNoise) slot = kNoise - 1;
        out.push_back(static_cast<feature_t>(1000 + slot));
      }
    }
    return out;
  };

  SplitMix64 arng(wmsketch::derive_seed(seed, "fixtures/deltoid-a"));
  SplitMix64 brng(wmsketch::derive_seed(seed, "fixtures/deltoid-b"));
  data.a = build(arng, true);
  data.b = build(brng, false);
  return data;
}

// Attributed events for the explanation app: 200 attributes, the first 20
// carry log-risk coefficients spread over [-2, 2], labels drawn from a
// logistic model over the event's attributes.
inline std::vector<wmsketch::apps::AttributedEvent> risk_events(uint64_t seed,
                                                                size_t events = 20000) {
  constexpr size_t kAttrs = 200, kPlanted = 20, kPerEvent = 5;
  std::vector<double> beta(kAttrs, 0.0);
  for (size_t j = 0; j < kPlanted; ++j)
    beta[j] = -2.0 + 4.0 * static_cast<double>(j) / (kPlanted - 1);

  SplitMix64 rng(wmsketch::derive_seed(seed, "fixtures/risk"));
  std::vector<wmsketch::apps::AttributedEvent> out;
  out.reserve(events);
  for (size_t e = 0; e < events; ++e) {
    wmsketch::apps::AttributedEvent ev;
    double z = -1.0;
    while (ev.attributes.size() < kPerEvent) {
      auto a = static_cast<feature_t>(rng.below(kAttrs));
      bool dup = false;
      for (feature_t seen : ev.attributes) dup |= seen == a;
      if (dup) continue;
      ev.attributes.push_back(a);
      z += beta[a];
    }
    double p = 1.0 / (1.0 + std::exp(-z));
    ev.label = rng.real() < p ? 1 : -1;
    out.push_back(std::move(ev));
  }
  return out;
}

}  // namespace fixtures
