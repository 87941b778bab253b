#pragma once

#include <cstdint>
#include <utility>

namespace wmsketch::sizing {

struct TheoryParams {
  double epsilon = 0.1;  // target recovery error fraction, in (0,1]
  double delta = 0.01;   // failure probability, in (0,1)
  uint64_t dim = 1;
  double beta = 1.0;     // loss smoothness
  double gamma = 1.0;    // max l1 norm of inputs
  double lambda = 1.0;   // must be positive
  double c1 = 1.0;
  double c2 = 1.0;
};

struct SketchSize {
  uint64_t k = 0;  // total accumulators, a multiple of s
  uint32_t s = 0;  // rows
};

// Real-valued forms, before rounding. Monotonicity holds for these; the
// rounded pair can locally move the other way.
double theoretical_k_real(const TheoryParams& p);
double theoretical_s_real(const TheoryParams& p);

// s = ceil(s_real) clamped to >= 1, k = k_real rounded up to a positive
// multiple of s.
SketchSize theoretical_size(const TheoryParams& p);

// beta = gamma = 1, unit constants.
SketchSize simplified_size(double epsilon, double delta, uint64_t dim, double lambda);

}  // namespace wmsketch::sizing
