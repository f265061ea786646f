#include "planner/stanley.hpp"

#include <algorithm>
#include <cmath>

namespace planner {

double lookup_Lx(double v, const StanleySchedule& sched) {
  if (v < 0.0) throw NegativeSpeed("lookup_Lx: v must be nonnegative");
  if (v < sched.v_break1) return sched.Lx_low;
  if (v < sched.v_break2) return sched.Lx_slope * v;
  return sched.Lx_high;
}

double lookup_ke(double v, const StanleySchedule& sched) {
  if (v < 0.0) throw NegativeSpeed("lookup_ke: v must be nonnegative");
  if (v < sched.v_break2) return sched.ke_slope * v + sched.ke_intercept;
  return sched.ke_high;
}

TrackingError compute_errors(const VehicleState& vehicle, const ReferenceLine& line,
                             double wheelbase) {
  const Point2 front{vehicle.x + wheelbase * std::cos(vehicle.heading),
                     vehicle.y + wheelbase * std::sin(vehicle.heading)};
  const FrenetState f = project_to_frenet(line, front);
  const PathPoint ref = interpolate_at(line, f.l);

  TrackingError err;
  err.e_fa = -f.d;  // path left of the axle -> positive
  err.theta_e = wrap_angle(ref.heading - vehicle.heading);
  return err;
}

double steer(const TrackingError& err, double v, const StanleySchedule& sched,
             StanleyMode mode) {
  if (v < 0.0) throw NegativeSpeed("steer: v must be nonnegative");
  const double ke = lookup_ke(v, sched);
  double correction;
  if (mode == StanleyMode::kModified) {
    correction = std::atan(ke * err.e_fa / lookup_Lx(v, sched));
  } else {
    correction = std::atan2(ke * err.e_fa, v);
  }
  return std::clamp(err.theta_e + correction, -sched.delta_max, sched.delta_max);
}

}  // namespace planner
