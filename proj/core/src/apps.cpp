#include "wmsketch/apps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "wmsketch/eval.hpp"
#include "wmsketch/hashing.hpp"

namespace wmsketch::apps {

double relative_risk(const RiskCounts& c) {
  if (c.n_x1_y1 > c.n_x1 || c.n_x0_y1 > c.n_x0)
    throw std::invalid_argument("joint count exceeds marginal");
  if (c.n_x1 == 0) return std::numeric_limits<double>::quiet_NaN();
  if (c.n_x0 == 0 || c.n_x0_y1 == 0) return std::numeric_limits<double>::infinity();
  double p1 = static_cast<double>(c.n_x1_y1) / static_cast<double>(c.n_x1);
  double p0 = static_cast<double>(c.n_x0_y1) / static_cast<double>(c.n_x0);
  return p1 / p0;
}

ExplainResult explain_stream(const std::vector<AttributedEvent>& events,
                             const LearnerSpec& spec, size_t k) {
  if (events.empty()) throw std::invalid_argument("empty event stream");
  auto learner = make_learner(spec);

  uint64_t total = 0, total_pos = 0;
  struct Marginal {
    uint64_t n_x1 = 0;
    uint64_t n_x1_y1 = 0;
  };
  std::unordered_map<feature_t, Marginal> counts;

  std::vector<feature_t> attrs;
  for (const auto& ev : events) {
    if (ev.label != 1 && ev.label != -1) throw std::invalid_argument("label must be +1 or -1");
    attrs = ev.attributes;
    std::sort(attrs.begin(), attrs.end());
    attrs.erase(std::unique(attrs.begin(), attrs.end()), attrs.end());
    ++total;
    bool pos = ev.label == 1;
    if (pos) ++total_pos;
    for (feature_t a : attrs) {
      learner->update(SparseVector::unit(a), ev.label);
      auto& m = counts[a];
      ++m.n_x1;
      if (pos) ++m.n_x1_y1;
    }
  }

  ExplainResult res;
  res.examples = learner->steps();
  for (const auto& e : learner->topk(k)) {
    const Marginal& m = counts.at(e.feature);
    RiskCounts rc;
    rc.n_x1 = m.n_x1;
    rc.n_x1_y1 = m.n_x1_y1;
    rc.n_x0 = total - m.n_x1;
    rc.n_x0_y1 = total_pos - m.n_x1_y1;
    ExplainRow row;
    row.feature = e.feature;
    row.weight = e.weight;
    row.risk = relative_risk(rc);
    row.log_risk = std::log(row.risk);
    res.top.push_back(row);
  }

  std::vector<double> xs, ys;
  for (const auto& row : res.top) {
    if (std::isfinite(row.log_risk)) {
      xs.push_back(row.weight);
      ys.push_back(row.log_risk);
    }
  }
  res.pearson = std::numeric_limits<double>::quiet_NaN();
  if (xs.size() >= 2) {
    double vx = 0, vy = 0, mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
      vx += (xs[i] - mx) * (xs[i] - mx);
      vy += (ys[i] - my) * (ys[i] - my);
    }
    if (vx > 0 && vy > 0) res.pearson = eval::pearson(xs, ys);
  }
  return res;
}

std::vector<feature_t> ratio_truth(const std::vector<feature_t>& a,
                                   const std::vector<feature_t>& b, double phi) {
  if (!(phi > 0.0)) throw std::invalid_argument("phi must be positive");
  std::unordered_map<feature_t, std::pair<uint64_t, uint64_t>> counts;
  for (feature_t id : a) ++counts[id].first;
  for (feature_t id : b) ++counts[id].second;
  std::vector<feature_t> out;
  for (const auto& [id, c] : counts) {
    double na = static_cast<double>(c.first), nb = static_cast<double>(c.second);
    bool qualifies = c.second == 0 || c.first == 0 || na >= phi * nb || nb >= phi * na;
    if (qualifies) out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double recall(const std::vector<feature_t>& detected, const std::vector<feature_t>& truth) {
  if (truth.empty()) return 1.0;
  std::unordered_set<feature_t> det(detected.begin(), detected.end());
  size_t hit = 0;
  for (feature_t id : truth) hit += det.count(id);
  return static_cast<double>(hit) / static_cast<double>(truth.size());
}

DeltoidResult deltoid_detect(const std::vector<feature_t>& a, const std::vector<feature_t>& b,
                             const DeltoidConfig& cfg) {
  if (a.empty() || b.empty()) throw std::invalid_argument("both streams must be nonempty");
  auto learner = make_learner(cfg.learner);
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i)
    learner->update_pair(SparseVector::unit(a[i]), 1, SparseVector::unit(b[i]), -1);
  for (size_t i = n; i < a.size(); ++i) learner->update(SparseVector::unit(a[i]), 1);
  for (size_t i = n; i < b.size(); ++i) learner->update(SparseVector::unit(b[i]), -1);

  DeltoidResult res;
  res.top = learner->topk(cfg.k);
  res.detected.reserve(res.top.size());
  for (const auto& e : res.top) res.detected.push_back(e.feature);
  std::sort(res.detected.begin(), res.detected.end());
  res.truth = ratio_truth(a, b, cfg.phi);
  res.recall = recall(res.detected, res.truth);
  res.steps = learner->steps();
  return res;
}

CmPairDetector::CmPairDetector(uint64_t seed, uint64_t k, uint32_t depth)
    : a_(derive_seed(seed, "cm/a"), k, depth), b_(derive_seed(seed, "cm/b"), k, depth) {}

double CmPairDetector::ratio(feature_t item) const {
  double ca = a_.query(item), cb = b_.query(item);
  if (ca == 0.0 && cb == 0.0) return 0.0;
  if (ca == 0.0 || cb == 0.0) return std::numeric_limits<double>::infinity();
  return std::max(ca / cb, cb / ca);
}

std::vector<feature_t> CmPairDetector::top_ratio(const std::vector<feature_t>& candidates,
                                                 size_t k) const {
  std::vector<feature_t> ids = candidates;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::stable_sort(ids.begin(), ids.end(), [&](feature_t x, feature_t y) {
    double rx = ratio(x), ry = ratio(y);
    if (rx != ry) return rx > ry;
    return x < y;
  });
  if (ids.size() > k) ids.resize(k);
  return ids;
}

feature_t pair_feature(const std::string& u, const std::string& v) {
  return hash::token_id(u + '\x1f' + v);
}

PmiResult pmi_stream(const std::vector<std::string>& tokens, const PmiConfig& cfg) {
  if (cfg.window < 2) throw std::invalid_argument("window must be at least 2");
  if (cfg.negatives < 1) throw std::invalid_argument("negatives must be at least 1");
  if (tokens.size() < cfg.window) throw std::invalid_argument("fewer tokens than the window");
  {
    std::unordered_set<std::string> vocab;
    for (const auto& t : tokens) {
      vocab.insert(t);
      if (vocab.size() >= 2) break;
    }
    if (vocab.size() < 2) throw std::invalid_argument("vocabulary must have at least two tokens");
  }

  LearnerSpec spec = cfg.learner;
  if (spec.budget_bytes == 0) {
    if (spec.heap == 0) spec.heap = 1024;
    if (spec.width == 0) spec.width = 4096;
    if (spec.depth == 0) spec.depth = 1;
  }

  auto learner = make_learner(spec);
  SplitMix64 neg_rng(derive_seed(cfg.seed, "pmi/negatives"));
  SplitMix64 res_rng(derive_seed(cfg.seed, "pmi/reservoir"));
  Reservoir<std::string> reservoir(cfg.reservoir);
  std::unordered_map<feature_t, std::pair<std::string, std::string>> names;

  PmiResult res;
  std::vector<std::string> window;
  for (const auto& tok : tokens) {
    reservoir.add(tok, res_rng);
    for (const auto& prev : window) {
      feature_t pid = pair_feature(prev, tok);
      names.emplace(pid, std::make_pair(prev, tok));
      learner->update(SparseVector::unit(pid), 1);
      ++res.positives;
      for (uint32_t j = 0; j < cfg.negatives; ++j) {
        const std::string& nu = reservoir.sample(neg_rng);
        const std::string& nv = reservoir.sample(neg_rng);
        feature_t nid = pair_feature(nu, nv);
        names.emplace(nid, std::make_pair(nu, nv));
        learner->update(SparseVector::unit(nid), -1);
      }
    }
    window.push_back(tok);
    if (window.size() > cfg.window - 1) window.erase(window.begin());
  }

  double offset = std::log(static_cast<double>(cfg.negatives));
  for (const auto& e : learner->topk(cfg.k)) {
    const auto& nm = names.at(e.feature);
    PmiPair p;
    p.u = nm.first;
    p.v = nm.second;
    p.pair = e.feature;
    p.weight = e.weight;
    p.pmi = e.weight + offset;
    res.top.push_back(p);
  }
  res.steps = learner->steps();
  return res;
}

}  // namespace wmsketch::apps
