#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "planner/stanley.hpp"

using namespace planner;

namespace {

ReferenceLine straight_line_x(double length, double step) {
  ReferenceLine line;
  line.spacing = step;
  const int n = static_cast<int>(length / step) + 1;
  line.points.resize(n);
  for (int i = 0; i < n; ++i) {
    line.points[i].position = {i * step, 0.0};
    line.points[i].s = i * step;
  }
  return line;
}

}  // namespace

TEST_CASE("look-forward distance schedule") {
  const StanleySchedule sched;
  const double vs[6] = {0.0, 5.0, 12.5, 20.0, 25.0, 30.0};
  const double expect[6] = {10.0, 10.0, 10.0, 16.0, 20.0, 20.0};
  for (int i = 0; i < 6; ++i)
    CHECK(lookup_Lx(vs[i], sched) == doctest::Approx(expect[i]).epsilon(1e-12));
  CHECK_THROWS_AS(lookup_Lx(-1.0, sched), NegativeSpeed);
}

TEST_CASE("cross-track gain schedule with the extended low-speed branch") {
  const StanleySchedule sched;
  const double vs[6] = {0.0, 5.0, 12.5, 20.0, 25.0, 30.0};
  const double expect[6] = {0.5, 0.6, 0.75, 0.9, 1.0, 1.0};
  for (int i = 0; i < 6; ++i)
    CHECK(lookup_ke(vs[i], sched) == doctest::Approx(expect[i]).epsilon(1e-12));
  CHECK_THROWS_AS(lookup_ke(-1.0, sched), NegativeSpeed);
}

TEST_CASE("schedules are continuous at the break speeds") {
  const StanleySchedule sched;
  for (double v_break : {12.5, 25.0}) {
    CHECK(lookup_Lx(v_break - 1e-9, sched) ==
          doctest::Approx(lookup_Lx(v_break + 1e-9, sched)).epsilon(1e-6));
    CHECK(lookup_ke(v_break - 1e-9, sched) ==
          doctest::Approx(lookup_ke(v_break + 1e-9, sched)).epsilon(1e-6));
  }
}

TEST_CASE("tracking errors of an aligned on-line vehicle vanish") {
  const ReferenceLine line = straight_line_x(50.0, 0.1);
  VehicleState v;
  v.x = 10.0;
  v.y = 0.0;
  v.heading = 0.0;
  const TrackingError err = compute_errors(v, line, 2.8);
  CHECK(std::abs(err.e_fa) < 1e-9);
  CHECK(std::abs(err.theta_e) < 1e-9);
}

TEST_CASE("vehicle left of the line sees the path to its right") {
  const ReferenceLine line = straight_line_x(50.0, 0.1);
  VehicleState v;
  v.x = 10.0;
  v.y = 1.0;  // 1 m left of the line
  v.heading = 0.0;
  const TrackingError err = compute_errors(v, line, 2.8);
  CHECK(err.e_fa == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(std::abs(err.theta_e) < 1e-9);
}

TEST_CASE("heading offset maps to the negated heading error") {
  const ReferenceLine line = straight_line_x(50.0, 0.1);
  VehicleState v;
  v.x = 10.0;
  v.heading = 0.3;
  // The front axle swings off the line with the heading; only theta_e is
  // pinned here.
  const TrackingError err = compute_errors(v, line, 2.8);
  CHECK(err.theta_e == doctest::Approx(-0.3).epsilon(1e-9));
  CHECK(std::abs(err.e_fa) < 2.8 * std::sin(0.3) + 1e-9);

  CHECK_THROWS_AS(compute_errors(v, ReferenceLine{}, 2.8), EmptyPath);
}

TEST_CASE("steering at zero error is zero") {
  const StanleySchedule sched;
  for (double v : {0.0, 5.0, 20.0})
    CHECK(steer({0.0, 0.0}, v, sched) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("modified law is finite at v = 0 and matches the schedule values") {
  const StanleySchedule sched;
  const double delta = steer({1.0, 0.0}, 0.0, sched, StanleyMode::kModified);
  // k_e(0) = 0.5, L_x(0) = 10: atan(0.5 * 1 / 10).
  CHECK(delta == doctest::Approx(std::atan(0.05)).epsilon(1e-12));
  CHECK(std::isfinite(delta));
}

TEST_CASE("classic law degenerates to +-pi/2 as v -> 0") {
  const StanleySchedule sched;
  const double near_zero = steer({1.0, 0.0}, 1e-12, sched, StanleyMode::kClassic);
  CHECK(std::abs(near_zero) == doctest::Approx(sched.delta_max).epsilon(1e-12));
  // Unclamped, the arctan term reaches pi/2 exactly at v = 0.
  StanleySchedule wide = sched;
  wide.delta_max = 3.0;
  const double at_zero = steer({1.0, 0.0}, 0.0, wide, StanleyMode::kClassic);
  CHECK(std::abs(at_zero) == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
}

TEST_CASE("steering is strictly monotone in the cross-track error") {
  const StanleySchedule sched;
  double prev = -1e300;
  for (double e = -3.0; e <= 3.0; e += 0.25) {
    const double delta = steer({e, 0.0}, 8.0, sched);
    if (std::abs(delta) < sched.delta_max - 1e-12) CHECK(delta > prev);
    prev = delta;
  }
}

TEST_CASE("steering is bounded by |theta_e| + pi/2 before the clamp") {
  StanleySchedule wide;
  wide.delta_max = 10.0;  // effectively unclamped
  for (double e : {-5.0, -1.0, 0.5, 4.0})
    for (double th : {-1.0, 0.0, 0.8})
      CHECK(std::abs(steer({e, th}, 3.0, wide)) <= std::abs(th) + M_PI / 2.0 + 1e-12);

  const StanleySchedule sched;
  for (double e : {-50.0, 50.0})
    CHECK(std::abs(steer({e, 1.5}, 3.0, sched)) <= sched.delta_max + 1e-15);
}

TEST_CASE("zero steering only at zero error inside the clamp region") {
  const StanleySchedule sched;
  CHECK(steer({0.0, 0.0}, 5.0, sched) == 0.0);
  CHECK(steer({0.2, 0.0}, 5.0, sched) != 0.0);
  CHECK(steer({0.0, 0.1}, 5.0, sched) != 0.0);
}
