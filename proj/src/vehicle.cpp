#include "planner/vehicle.hpp"

#include <algorithm>
#include <cmath>

#include "planner/geometry.hpp"

namespace planner {

VehicleState bicycle_step(const VehicleState& s, double delta, double a_cmd,
                          double dt, double wheelbase, double T_L, double K_L) {
  if (!(dt > 0.0 && dt <= 0.1)) throw InvalidStep("bicycle_step: dt must be in (0, 0.1]");
  if (std::abs(delta) >= M_PI / 2.0 - 1e-6)
    throw InvalidStep("bicycle_step: |delta| must be below pi/2");
  if (wheelbase <= 0.0 || T_L <= 0.0)
    throw InvalidStep("bicycle_step: wheelbase and T_L must be positive");

  VehicleState out = s;
  const double target = K_L * a_cmd;
  out.a = target + (s.a - target) * std::exp(-dt / T_L);
  out.x = s.x + s.v * std::cos(s.heading) * dt;
  out.y = s.y + s.v * std::sin(s.heading) * dt;
  out.heading = wrap_angle(s.heading + s.v / wheelbase * std::tan(delta) * dt);
  out.v = std::max(0.0, s.v + out.a * dt);
  return out;
}

}  // namespace planner
