#pragma once

#include "planner/geometry.hpp"
#include "planner/vehicle.hpp"

namespace planner {

// Velocity schedules for the modified steering law, plus the steering limit.
// The piecewise definitions are continuous at both break speeds.
struct StanleySchedule {
  double Lx_low = 10.0;      // m, look-forward distance below v_break1
  double Lx_slope = 0.8;     // s, slope of the linear segment
  double Lx_high = 20.0;     // m, cap above v_break2
  double v_break1 = 12.5;    // m/s
  double v_break2 = 25.0;    // m/s
  double ke_intercept = 0.5;
  double ke_slope = 0.02;    // s/m
  double ke_high = 1.0;
  double delta_max = 0.6;    // rad, steering limit
};

// Mode flag: the modified law divides by the scheduled look-forward distance;
// the classic law divides by speed and is singular at v = 0.
enum class StanleyMode { kModified, kClassic };

// Front-axle tracking error. e_fa is positive when the reference path lies
// left of the front axle (the vehicle is right of the path); theta_e is the
// path heading minus the vehicle heading, wrapped.
struct TrackingError {
  double e_fa = 0.0;     // m
  double theta_e = 0.0;  // rad
};

// Look-forward distance L_x(v). Throws NegativeSpeed.
double lookup_Lx(double v, const StanleySchedule& sched);
// Cross-track gain k_e(v), with the linear segment extended down to v = 0.
double lookup_ke(double v, const StanleySchedule& sched);

// Errors of the front axle (rear pose advanced by the wheelbase) against the
// interpolated nearest point of the line.
TrackingError compute_errors(const VehicleState& vehicle, const ReferenceLine& line,
                             double wheelbase);

// delta = theta_e + atan(k_e(v) e_fa / L_x(v)), clamped to +-delta_max.
// Finite for every input, including v = 0 in modified mode.
double steer(const TrackingError& err, double v, const StanleySchedule& sched,
             StanleyMode mode = StanleyMode::kModified);

}  // namespace planner
