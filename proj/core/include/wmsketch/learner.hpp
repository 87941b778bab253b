#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "wmsketch/model.hpp"
#include "wmsketch/types.hpp"

namespace wmsketch {

enum class Method { wm, awm, trunc, ptrunc, ss, hash, dense, cmff };

const char* method_name(Method m);
Method method_from_name(std::string_view name);  // throws on unknown

// Online linear classifier trained by regularized OGD. All implementations
// share the step shape: margins are computed from the pre-step state, the
// l2 decay is folded into one global scale factor (renormalized when it
// underflows 1e-12), and gradient writes use the post-decay scale, so a step
// costs O(work per touched feature) regardless of lambda.
//
// Single-writer. Reads (margin/query/topk) are safe between updates.
class OnlineLearner {
 public:
  OnlineLearner(Loss loss, LrSchedule schedule, double lambda);
  virtual ~OnlineLearner() = default;

  virtual double margin(const SparseVector& x) const = 0;
  virtual double query(feature_t feature) const = 0;
  virtual TopKEstimate topk(size_t k) const = 0;
  virtual const char* name() const = 0;

  // One OGD step on example (x, y), y in {-1,+1}; prediction state is the
  // pre-update state.
  void update(const SparseVector& x, int y);

  // One OGD step on the summed loss of two examples: both margins are taken
  // from the pre-step state and one decay/step-count is applied. Swapping the
  // two examples with negated labels negates the step exactly.
  void update_pair(const SparseVector& xa, int ya, const SparseVector& xb, int yb);

  uint64_t steps() const { return t_; }
  double scale() const { return scale_; }
  double lambda() const { return lambda_; }
  const Loss& loss() const { return loss_; }
  const LrSchedule& schedule() const { return schedule_; }

  // Snapshot restore hook.
  void restore_clock(uint64_t t, double scale);

 protected:
  // touched: ascending union of the examples' supports. dir: coalesced
  // gradient direction sum_e y_e l'(y_e tau_e) x_e (zero entries dropped);
  // the weight-space step is -eta * dir.
  virtual void apply_step(const std::vector<feature_t>& touched,
                          const SparseVector& dir, double eta) = 0;
  // Multiply all stored raw weights by f (scale renormalization).
  virtual void rescale(double f) = 0;

  double decay(double eta);  // applies l2 decay to scale_, returns post-decay scale

  Loss loss_;
  LrSchedule schedule_;
  double lambda_;
  uint64_t t_ = 0;
  double scale_ = 1.0;

  static constexpr double kScaleFloor = 1e-12;
};

// Unified construction spec for the CLI and apps. Budget resolution uses the
// 4-bytes-per-cell cost model (see eval.hpp).
struct LearnerSpec {
  Method method = Method::awm;
  uint64_t width = 0;     // sketch width (wm/awm/hash buckets)
  uint32_t depth = 1;     // sketch depth
  uint64_t heap = 0;      // heap capacity / K
  uint64_t budget_bytes = 0;  // fills unset width/depth/heap when nonzero
  Loss loss{};
  LrSchedule schedule{};
  double lambda = 0.0;
  uint64_t seed = 42;
  bool injective = false;
};

// Resolves budget defaults (mutating a copy of spec is allowed via resolve).
LearnerSpec resolve_spec(const LearnerSpec& spec);
std::unique_ptr<OnlineLearner> make_learner(const LearnerSpec& spec);

}  // namespace wmsketch
