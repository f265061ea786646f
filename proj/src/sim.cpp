#include "planner/sim.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "planner/spline.hpp"

namespace planner {

namespace {

// Deterministic standard-normal draws (Box-Muller on mt19937_64), so traces
// do not depend on the standard library's distribution implementation.
class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    const double u1 = std::max(next_uniform(), 1e-300);
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  double next_uniform() {
    return (rng_() >> 11) * (1.0 / 9007199254740992.0);  // 53-bit mantissa
  }
  std::mt19937_64 rng_;
};

// Windowed projection onto a long polyline: scans around the previous hit
// and widens to a full scan when the result lands on the window edge.
class LocalProjector {
 public:
  explicit LocalProjector(const ReferenceLine& line) : line_(line) {}

  FrenetState project(const Point2& p) {
    const int n = static_cast<int>(line_.points.size());
    int lo = std::max(0, last_ - kWindow);
    int hi = std::min(n - 1, last_ + kWindow);
    FrenetState f = project_range(p, lo, hi);
    if ((last_ <= lo + 1 && lo > 0) || (last_ >= hi - 1 && hi < n - 1)) {
      f = project_range(p, 0, n - 1);
    }
    return f;
  }

 private:
  static constexpr int kWindow = 64;

  FrenetState project_range(const Point2& p, int lo, int hi) {
    const auto& pts = line_.points;
    double best_d2 = std::numeric_limits<double>::infinity();
    FrenetState f;
    for (int i = lo; i < hi; ++i) {
      const Point2& a = pts[i].position;
      const Point2& b = pts[i + 1].position;
      const Point2 ab = b - a;
      const double len2 = ab.squaredNorm();
      double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      const Point2 foot = a + t * ab;
      const double d2 = (p - foot).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        f.l = pts[i].s + t * (pts[i + 1].s - pts[i].s);
        f.d = cross2(ab.normalized(), p - foot);
        last_ = i;
      }
    }
    return f;
  }

  const ReferenceLine& line_;
  int last_ = 0;
};

Point2 centroid(const std::vector<Point2>& pts) {
  Point2 c{0.0, 0.0};
  for (const Point2& p : pts) c += p;
  return pts.empty() ? c : Point2(c / static_cast<double>(pts.size()));
}

// Tracking line built from the plan's Cartesian samples; s restarts at the
// plan's own cumulative chord length.
ReferenceLine plan_to_line(const CandidateTrajectory& plan, double spacing) {
  ReferenceLine line;
  line.spacing = spacing;
  line.points.reserve(plan.samples.size());
  double s = 0.0;
  for (size_t i = 0; i < plan.samples.size(); ++i) {
    PathPoint p = plan.samples[i].point;
    if (i > 0)
      s += (p.position - plan.samples[i - 1].point.position).norm();
    p.s = s;
    line.points.push_back(p);
  }
  return line;
}

ObstacleSet advance_obstacles(const std::vector<Obstacle>& obstacles, double t) {
  std::vector<Obstacle> moved = obstacles;
  for (Obstacle& o : moved)
    for (Point2& p : o.points) p += t * o.velocity;
  return ObstacleSet(std::move(moved));
}

double actual_clearance(const VehicleState& state,
                        const std::vector<Obstacle>& obstacles, double t,
                        const FootprintCircles& footprint) {
  double clearance = std::numeric_limits<double>::infinity();
  const Point2 dir{std::cos(state.heading), std::sin(state.heading)};
  const Point2 pos{state.x, state.y};
  for (const auto& circle : footprint.circles) {
    const Point2 center = pos + circle.offset * dir;
    for (const Obstacle& o : obstacles)
      for (const Point2& p : o.points)
        clearance = std::min(clearance,
                             (center - (p + t * o.velocity)).norm() - circle.radius);
  }
  return clearance;
}

}  // namespace

ReferenceLine build_reference(const Scenario& scenario) {
  const ParametricSpline spline = fit_spline(scenario.waypoints);
  ReferenceLine line = resample_uniform(spline, scenario.sim.resample_step);
  return smooth_corners(line, scenario.corners, scenario.sim.resample_step);
}

Trace run(const Scenario& scenario) {
  scenario.validate();
  const ReferenceLine reference = build_reference(scenario);

  const VehicleConfig& veh = scenario.vehicle;
  const SimSettings& sim = scenario.sim;
  const AccSettings& acc = scenario.acc;

  const int n_ticks = static_cast<int>(std::llround(sim.duration / sim.dt));
  const int replan_every =
      std::max(1, static_cast<int>(std::llround(sim.replan_period / sim.dt)));
  const int acc_every =
      std::max(1, static_cast<int>(std::llround(acc.params.T / sim.dt)));

  // Two LQG instances: gap follower on the detected lead, speed regulation
  // against a phantom lead at the cruise-speed desired gap. The applied
  // command is the smaller of the two. The controller sampling time is
  // snapped to the tick multiple it actually runs at.
  AccParams acc_params = acc.params;
  acc_params.T = acc_every * sim.dt;
  LqgController follow_ctrl(acc_params, acc.q_proc, acc.r_meas);
  LqgController cruise_ctrl(acc_params, acc.q_proc, acc.r_meas);

  VehicleState state = veh.initial;
  Gaussian noise(scenario.rng_seed);
  const Eigen::Vector3d noise_std{std::sqrt(acc.r_meas(0, 0)),
                                  std::sqrt(acc.r_meas(1, 1)),
                                  std::sqrt(acc.r_meas(2, 2))};

  Trace trace;
  trace.dt = sim.dt;
  trace.rows.reserve(n_ticks);

  LocalProjector ego_projector(reference);
  std::optional<CandidateTrajectory> current_plan;
  ReferenceLine track_line;
  bool emergency = false;
  double u = 0.0;
  double delta = 0.0;
  double d_error_meas = 0.0;

  const double phantom_gap = desired_distance(sim.cruise_speed, acc.params);

  for (int k = 0; k < n_ticks; ++k) {
    const double t = k * sim.dt;
    const Point2 rear{state.x, state.y};
    const FrenetState ego = ego_projector.project(rear);

    const bool plan_exhausted =
        current_plan && ego.l > current_plan->poly.le - std::max(1.0, scenario.planner.sample_dl);
    if (k % replan_every == 0 || plan_exhausted) {
      FrenetState c0;
      if (current_plan && ego.l >= current_plan->poly.l0 &&
          ego.l <= current_plan->poly.le &&
          std::abs(current_plan->poly.value(ego.l) - ego.d) < 0.5) {
        // Stitch from the previous plan for continuity.
        c0 = {ego.l, current_plan->poly.value(ego.l),
              current_plan->poly.deriv1(ego.l), current_plan->poly.deriv2(ego.l)};
      } else {
        const PathPoint ref_pt = interpolate_at(reference, ego.l);
        const double dtheta = wrap_angle(state.heading - ref_pt.heading);
        c0 = {ego.l, ego.d, (1.0 - ref_pt.curvature * ego.d) * std::tan(dtheta), 0.0};
      }

      const ObstacleSet now_obstacles = advance_obstacles(scenario.obstacles, t);
      PlanInput input;
      input.c0 = c0;
      input.grid = scenario.planner.grid;
      input.weights = scenario.planner.weights;
      input.reference = &reference;
      input.obstacles = &now_obstacles;
      input.footprint = scenario.planner.footprint;
      input.previous = current_plan ? &*current_plan : nullptr;
      input.speed = std::max(state.v, 1.0);
      input.sample_dl = scenario.planner.sample_dl;
      input.horizon = scenario.planner.horizon;

      ReplanRow replan;
      replan.index = static_cast<int>(trace.replans.size());
      replan.time = t;
      PlanDiagnostics diag;
      try {
        CandidateTrajectory selected = plan(input, &diag);
        replan.success = true;
        replan.selected_cost = selected.cost;
        replan.selected_d_e = selected.d_e;
        replan.selected_l_e = selected.l_e;
        replan.predicted_clearance = selected.min_clearance;
        current_plan = std::move(selected);
        track_line = plan_to_line(*current_plan, scenario.planner.sample_dl);
        emergency = false;
      } catch (const NoFeasibleTrajectory&) {
        emergency = true;
      }
      replan.candidate_count = diag.candidate_count;
      replan.checked_count = diag.checked_count;
      replan.selected_grid_index = diag.selected_grid_index;
      trace.replans.push_back(replan);
    }

    if (k % acc_every == 0) {
      // Lead selection: nearest obstacle ahead whose centroid stays within
      // the lateral corridor around the intended path (the active plan where
      // it reaches, the reference line beyond it).
      double lead_gap = std::numeric_limits<double>::infinity();
      double lead_speed = 0.0;
      bool lead_found = false;
      const double ego_front_l = ego.l + veh.wheelbase;
      for (const Obstacle& o : scenario.obstacles) {
        if (o.points.empty()) continue;
        const Point2 c = centroid(o.points) + t * o.velocity;
        FrenetState fo;
        try {
          fo = project_to_frenet(reference, c, acc.detection_range);
        } catch (const PointOutOfRange&) {
          continue;
        }
        if (fo.l <= ego_front_l) continue;
        const double gap = fo.l - ego_front_l;
        if (gap > acc.detection_range) continue;
        double lateral = std::abs(fo.d);
        if (current_plan && fo.l <= current_plan->poly.le && track_line.points.size() >= 2)
          lateral = std::abs(project_to_frenet(track_line, c, 1e9).d);
        if (lateral > acc.corridor) continue;
        if (gap < lead_gap) {
          lead_gap = gap;
          const PathPoint at = interpolate_at(reference, fo.l);
          lead_speed = o.velocity.dot(Eigen::Vector2d(std::cos(at.heading),
                                                      std::sin(at.heading)));
          lead_found = true;
        }
      }

      AccState phantom{desired_distance(state.v, acc.params) - phantom_gap,
                       sim.cruise_speed - state.v, state.a};
      AccState lead = phantom;
      if (lead_found)
        lead = {desired_distance(state.v, acc.params) - lead_gap,
                lead_speed - state.v, state.a};
      if (sim.measurement_noise) {
        const double n0 = noise() * noise_std[0];
        const double n1 = noise() * noise_std[1];
        const double n2 = noise() * noise_std[2];
        lead.d_error += n0;
        lead.v_rel += n1;
        lead.a_f += n2;
        phantom.d_error += n0;
        phantom.v_rel += n1;
        phantom.a_f += n2;
      }
      const double u_follow = follow_ctrl.acc_command(lead);
      const double u_cruise = cruise_ctrl.acc_command(phantom);
      u = std::min(u_follow, u_cruise);
      d_error_meas = lead.d_error;
    }

    double u_applied = u;
    TrackingError err;
    if (emergency) {
      u_applied = -acc.params.u_max;  // full allowed braking, steering held
    } else if (track_line.points.size() >= 2) {
      err = compute_errors(state, track_line, veh.wheelbase);
      delta = steer(err, state.v, scenario.stanley.schedule, scenario.stanley.mode);
    }

    TraceRow& row = trace.rows.emplace_back();
    row.time = t;
    row.state = state;
    row.delta = delta;
    row.u = u_applied;
    row.e_fa = err.e_fa;
    row.theta_e = err.theta_e;
    row.d_error = d_error_meas;
    row.clearance = actual_clearance(state, scenario.obstacles, t,
                                     scenario.planner.footprint);
    row.candidate_id = current_plan ? current_plan->grid_index : -1;
    row.emergency = emergency;
    state = bicycle_step(state, delta, u_applied, sim.dt, veh.wheelbase,
                         acc.params.T_L, acc.params.K_L);
  }

  return trace;
}

Metrics metrics(const Trace& trace) {
  if (trace.rows.empty()) throw EmptyTrace("metrics: empty trace");

  Metrics m;
  double sum_sq_e = 0.0;
  double sum_abs_derr = 0.0;
  for (size_t i = 0; i < trace.rows.size(); ++i) {
    const TraceRow& row = trace.rows[i];
    m.max_cross_track = std::max(m.max_cross_track, std::abs(row.e_fa));
    sum_sq_e += row.e_fa * row.e_fa;
    sum_abs_derr += std::abs(row.d_error);
    m.min_clearance = std::min(m.min_clearance, row.clearance);
    if (i + 1 < trace.rows.size()) {
      const TraceRow& next = trace.rows[i + 1];
      const double yaw_rate = wrap_angle(next.state.heading - row.state.heading) / trace.dt;
      m.max_lateral_accel = std::max(m.max_lateral_accel,
                                     std::abs(row.state.v * yaw_rate));
      m.max_jerk = std::max(m.max_jerk,
                            std::abs(next.state.a - row.state.a) / trace.dt);
    }
  }
  m.rms_cross_track = std::sqrt(sum_sq_e / trace.rows.size());
  m.mean_abs_distance_error = sum_abs_derr / trace.rows.size();
  m.replan_count = static_cast<int>(trace.replans.size());
  if (!trace.replans.empty()) {
    double sum_checked = 0.0;
    for (const ReplanRow& r : trace.replans) sum_checked += r.checked_count;
    m.mean_checked = sum_checked / trace.replans.size();
  }
  return m;
}

}  // namespace planner
