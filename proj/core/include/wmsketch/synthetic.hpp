#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "wmsketch/types.hpp"

namespace wmsketch::io {

struct SyntheticSpec {
  uint64_t dim = 1024;
  uint32_t sparsity = 10;   // nonzeros per example
  uint32_t heavy = 16;      // planted true weights, on the most popular ids
  double heavy_min = 1.0;   // |weight| drawn uniformly from [heavy_min, heavy_max]
  double heavy_max = 3.0;
  double noise = 0.0;       // label flip rate, in [0, 0.5)
  double zipf = 0.0;        // popularity skew: p(id) proportional to (id+1)^-zipf
  uint64_t steps = 10000;
  uint64_t seed = 42;
};

struct SyntheticData {
  std::vector<LabeledExample> stream;
  std::unordered_map<feature_t, double> w_true;
};

// Examples draw `sparsity` distinct ids under the popularity law with values
// uniform in (0, 1]; labels are sign(w_true . x) flipped at the noise rate.
// Deterministic under seed.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace wmsketch::io
