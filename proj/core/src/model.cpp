#include "wmsketch/model.hpp"

#include <cmath>
#include <stdexcept>

namespace wmsketch {

static void check_finite(double tau) {
  if (!std::isfinite(tau)) throw std::invalid_argument("margin must be finite");
}

double Loss::value(double tau) const {
  check_finite(tau);
  if (kind == LossKind::logistic) {
    // log(1 + exp(-tau)) without overflow on either tail
    if (tau >= 0.0) return std::log1p(std::exp(-tau));
    return -tau + std::log1p(std::exp(tau));
  }
  double h = smoothing;
  if (tau >= 1.0) return 0.0;
  if (tau >= 1.0 - h) {
    double d = 1.0 - tau;
    return d * d / (2.0 * h);
  }
  return (1.0 - tau) - h / 2.0;
}

double Loss::grad(double tau) const {
  check_finite(tau);
  if (kind == LossKind::logistic) {
    return -1.0 / (1.0 + std::exp(tau));
  }
  double h = smoothing;
  if (tau >= 1.0) return 0.0;
  if (tau >= 1.0 - h) return (tau - 1.0) / h;
  return -1.0;
}

Loss make_loss(LossKind kind, double smoothing) {
  if (kind == LossKind::smoothed_hinge && !(smoothing > 0.0))
    throw std::invalid_argument("hinge smoothing width must be positive");
  return Loss{kind, smoothing};
}

double LrSchedule::rate(uint64_t t) const {
  switch (kind) {
    case ScheduleKind::constant: return eta0;
    case ScheduleKind::inv_sqrt: return eta0 / std::sqrt(static_cast<double>(t) + 1.0);
    case ScheduleKind::inv_strongly_convex:
      return eta0 / (1.0 + eta0 * lambda * static_cast<double>(t));
  }
  throw std::invalid_argument("unknown schedule");
}

LrSchedule make_schedule(ScheduleKind kind, double eta0, double lambda) {
  if (!(eta0 > 0.0)) throw std::invalid_argument("eta0 must be positive");
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  if (kind == ScheduleKind::inv_strongly_convex && lambda == 0.0)
    throw std::invalid_argument("inv-strongly-convex schedule needs lambda > 0");
  return LrSchedule{kind, eta0, lambda};
}

int predict_label(double tau) {
  check_finite(tau);
  return tau >= 0.0 ? 1 : -1;
}

}  // namespace wmsketch
