#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "wmsketch/model.hpp"

using namespace wmsketch;

TEST_CASE("logistic loss values and gradients") {
  Loss l = make_loss(LossKind::logistic);
  CHECK(l.value(0.0) == doctest::Approx(0.6931471805599453).epsilon(1e-15));
  CHECK(l.grad(0.0) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(l.grad(0.5) == doctest::Approx(-1.0 / (1.0 + std::exp(0.5))).epsilon(1e-15));
  CHECK(l.value(50.0) < 1e-20);
  CHECK(l.value(-50.0) == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(l.grad(-50.0) == doctest::Approx(-1.0).epsilon(1e-12));
  for (double tau : {-3.0, -0.4, 0.0, 0.7, 4.0}) {
    CHECK(l.grad(tau) <= 0.0);
    CHECK(std::abs(l.grad(tau)) <= 1.0);
    CHECK(l.value(tau) >= 0.0);
  }
}

TEST_CASE("smoothed hinge piecewise form, width 1") {
  Loss l = make_loss(LossKind::smoothed_hinge, 1.0);
  CHECK(l.value(2.0) == 0.0);
  CHECK(l.grad(2.0) == 0.0);
  CHECK(l.value(1.0) == 0.0);
  CHECK(l.grad(1.0) == 0.0);
  CHECK(l.value(0.5) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(l.grad(0.5) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(l.value(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(l.value(-1.0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(l.grad(-1.0) == -1.0);
}

TEST_CASE("smoothed hinge wider quadratic zone") {
  Loss l = make_loss(LossKind::smoothed_hinge, 2.0);
  CHECK(l.value(0.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(l.grad(0.0) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(l.value(-1.0) == doctest::Approx(2.0 - 1.0).epsilon(1e-15));
  CHECK(l.grad(-1.5) == -1.0);
}

TEST_CASE("gradients match central finite differences away from kinks") {
  const double h = 1e-6;
  for (LossKind kind : {LossKind::logistic, LossKind::smoothed_hinge}) {
    Loss l = make_loss(kind, 1.0);
    for (double tau : {-1.7, -0.5, 0.3, 0.5, 1.5, 2.4}) {
      double fd = (l.value(tau + h) - l.value(tau - h)) / (2.0 * h);
      CHECK(l.grad(tau) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("loss rejects non-finite margins") {
  Loss l = make_loss(LossKind::logistic);
  CHECK_THROWS_AS(l.value(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  CHECK_THROWS_AS(l.grad(std::numeric_limits<double>::infinity()), std::invalid_argument);
  CHECK_THROWS_AS(make_loss(LossKind::smoothed_hinge, 0.0), std::invalid_argument);
}

TEST_CASE("step size schedules") {
  LrSchedule c = make_schedule(ScheduleKind::constant, 0.25);
  CHECK(c.rate(0) == 0.25);
  CHECK(c.rate(1000) == 0.25);

  LrSchedule s = make_schedule(ScheduleKind::inv_sqrt, 0.5);
  CHECK(s.rate(0) == 0.5);
  CHECK(s.rate(3) == doctest::Approx(0.25).epsilon(1e-15));

  LrSchedule sc = make_schedule(ScheduleKind::inv_strongly_convex, 1.0, 0.5);
  CHECK(sc.rate(0) == 1.0);
  CHECK(sc.rate(2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sc.rate(4) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("schedule validation") {
  CHECK_THROWS_AS(make_schedule(ScheduleKind::constant, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_schedule(ScheduleKind::constant, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_schedule(ScheduleKind::inv_sqrt, 1.0, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(make_schedule(ScheduleKind::inv_strongly_convex, 1.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("prediction thresholds at zero") {
  CHECK(predict_label(0.0) == 1);
  CHECK(predict_label(3.7) == 1);
  CHECK(predict_label(-0.001) == -1);
  CHECK_THROWS_AS(predict_label(std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
}
