#pragma once

#include <cstdint>

namespace wmsketch {

enum class LossKind { logistic, smoothed_hinge };

// Margin losses for labels y in {-1,+1}, evaluated at tau = y * <w, x>.
// Both are convex with derivative magnitude <= 1.
struct Loss {
  LossKind kind = LossKind::logistic;
  // Width of the quadratic zone of the smoothed hinge; 1 recovers the
  // standard quadratically-smoothed hinge. Ignored by logistic.
  double smoothing = 1.0;

  double value(double tau) const;
  double grad(double tau) const;
};

Loss make_loss(LossKind kind, double smoothing = 1.0);

enum class ScheduleKind { constant, inv_sqrt, inv_strongly_convex };

// Step sizes: constant eta0; eta0/sqrt(t+1); eta0/(1 + eta0*lambda*t).
struct LrSchedule {
  ScheduleKind kind = ScheduleKind::inv_sqrt;
  double eta0 = 0.1;
  double lambda = 0.0;  // used by inv_strongly_convex only

  double rate(uint64_t t) const;
};

LrSchedule make_schedule(ScheduleKind kind, double eta0, double lambda = 0.0);

// +1 iff tau >= 0. Rejects non-finite tau.
int predict_label(double tau);

}  // namespace wmsketch
