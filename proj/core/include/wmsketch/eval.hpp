#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "wmsketch/learner.hpp"
#include "wmsketch/types.hpp"

namespace wmsketch::eval {

// 4B per feature identifier, weight, and auxiliary value (counts, reservoir
// keys). Sketch accumulators are weights; heap entries carry an id plus a
// weight plus any per-method aux.
struct MemoryCostModel {
  uint64_t bytes_per_id = 4;
  uint64_t bytes_per_weight = 4;
  uint64_t bytes_per_aux = 4;
};

struct MethodConfig {
  Method method = Method::wm;
  size_t heap = 0;      // |S| for wm/awm, K for the truncation/counter methods
  uint64_t width = 0;   // accumulators per sketch row
  uint32_t depth = 0;
  uint64_t budget_bytes = 0;
};

uint64_t memory_cost(const MethodConfig& cfg, const MemoryCostModel& m = {});

// Power-of-two sweep bounds, inclusive. Depth runs 1..depth_max.
struct GridSpec {
  size_t heap_min = 8;
  size_t heap_max = size_t{1} << 16;
  uint64_t width_min = 8;
  uint64_t width_max = uint64_t{1} << 20;
  uint32_t depth_max = 31;
};

// Every grid point fitting the budget, sorted by cost descending; ties by
// heap, then width, then depth, ascending.
std::vector<MethodConfig> enumerate_configs(Method method, uint64_t budget_bytes,
                                            const GridSpec& grid = {});

// One deterministic shape per method for a byte budget: awm splits the budget
// evenly between the heap and a depth-1 sketch; wm caps the heap at 128
// entries and spends the rest on depth at width 128 (256 from 32 KB up);
// the single-structure methods spend everything on their one table.
MethodConfig suggest_config(Method method, uint64_t budget_bytes);

// ||w_est^K - w_*|| / ||w_*^K - w_*||, both numerator vectors K-sparse in the
// full space. True top-K ties break toward the smaller id. Zero denominator:
// exact estimate gives 1, anything else +inf.
double rel_err(const TopKEstimate& estimate,
               const std::unordered_map<feature_t, double>& w_star, size_t k);

// Top k of a dense map by |weight| desc, ties toward the smaller id.
std::vector<WeightEntry> true_topk(const std::unordered_map<feature_t, double>& w,
                                   size_t k);

struct OnlineStats {
  uint64_t mistakes = 0;
  uint64_t examples = 0;
  double error_rate() const;
};

double online_error_rate(uint64_t mistakes, uint64_t examples);

// Predict-then-update pass over the stream.
OnlineStats run_online(OnlineLearner& learner, const std::vector<LabeledExample>& stream);

double pearson(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace wmsketch::eval
