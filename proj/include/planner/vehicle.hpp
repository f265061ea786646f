#pragma once

#include "planner/errors.hpp"

namespace planner {

// Kinematic bicycle state; (x, y) is the rear axle. `a` is the realized
// acceleration after the first-order actuation lag.
struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // rad, wrapped to (-pi, pi]
  double v = 0.0;        // m/s, >= 0
  double a = 0.0;        // m/s^2
};

// Advances the state by dt: exact first-order lag of `a` toward K_L * a_cmd,
// then the kinematic bicycle update. Speed is clamped at zero (no reverse).
// Throws InvalidStep for dt outside (0, 0.1] or |delta| >= pi/2.
VehicleState bicycle_step(const VehicleState& s, double delta, double a_cmd,
                          double dt, double wheelbase, double T_L, double K_L);

}  // namespace planner
