#pragma once

#include <limits>
#include <vector>

#include "planner/scenario.hpp"
#include "planner/vehicle.hpp"

namespace planner {

struct TraceRow {
  double time = 0.0;
  VehicleState state;
  double delta = 0.0;      // applied steering, rad
  double u = 0.0;          // applied acceleration command, m/s^2
  double e_fa = 0.0;       // front-axle cross-track error vs the active plan
  double theta_e = 0.0;    // heading error, rad
  double d_error = 0.0;    // ACC distance error, m
  double clearance = std::numeric_limits<double>::infinity();  // m
  int candidate_id = -1;   // grid index of the active plan
  bool emergency = false;  // planner had no feasible trajectory
};

struct ReplanRow {
  int index = 0;
  double time = 0.0;
  int candidate_count = 0;
  int checked_count = 0;
  int selected_grid_index = -1;
  double selected_cost = 0.0;
  double selected_d_e = 0.0;
  double selected_l_e = 0.0;
  double predicted_clearance = std::numeric_limits<double>::infinity();
  bool success = false;
};

struct Trace {
  std::vector<TraceRow> rows;
  std::vector<ReplanRow> replans;
  double dt = 0.0;
};

// Spline fit of the scenario waypoints, uniform resampling, then corner
// smoothing: the reference line every downstream stage consumes.
ReferenceLine build_reference(const Scenario& scenario);

// Closed-loop run: periodic lateral replanning, LQG longitudinal control,
// Stanley steering against the active plan, kinematic bicycle plant.
// Deterministic for a fixed scenario + seed.
Trace run(const Scenario& scenario);

struct Metrics {
  double max_cross_track = 0.0;        // m
  double rms_cross_track = 0.0;        // m
  double max_lateral_accel = 0.0;      // m/s^2
  double max_jerk = 0.0;               // m/s^3
  double min_clearance = std::numeric_limits<double>::infinity();  // m
  double mean_abs_distance_error = 0.0;  // m
  int replan_count = 0;
  double mean_checked = 0.0;  // candidates collision-checked per replan
};

// Deterministic aggregation over the trace. Throws EmptyTrace.
Metrics metrics(const Trace& trace);

}  // namespace planner
