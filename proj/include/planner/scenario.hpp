#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "planner/acc.hpp"
#include "planner/bezier.hpp"
#include "planner/geometry.hpp"
#include "planner/lateral_planner.hpp"
#include "planner/stanley.hpp"
#include "planner/vehicle.hpp"

namespace planner {

struct VehicleConfig {
  double wheelbase = 2.8;  // m
  double width = 1.8;      // m
  double length = 4.5;     // m
  VehicleState initial;
};

struct PlannerSettings {
  SamplingGrid grid;
  CostWeights weights;
  double sample_dl = 0.5;        // m
  double road_half_width = 4.0;  // m, bounds |d_e|
  double horizon = 30.0;         // s, collision-check window
  FootprintCircles footprint;    // default: cover_box of the vehicle
  bool footprint_from_vehicle = true;
};

struct AccSettings {
  AccParams params;
  Eigen::Matrix3d q_proc = Eigen::Matrix3d::Identity() * 1e-3;
  Eigen::Matrix3d r_meas = Eigen::Vector3d(0.25, 0.04, 0.01).asDiagonal();
  double corridor = 2.0;          // m, lateral half-width for lead selection
  double detection_range = 200.0; // m, leads beyond this are ignored
};

struct StanleySettings {
  StanleySchedule schedule;
  StanleyMode mode = StanleyMode::kModified;
};

struct SimSettings {
  double dt = 0.02;            // s, control tick
  double replan_period = 0.1;  // s
  double duration = 20.0;      // s
  double cruise_speed = 10.0;  // m/s
  double resample_step = 0.1;  // m, reference-line sample spacing
  bool measurement_noise = false;
};

// Everything one run needs: road geometry, traffic, vehicle, and the
// per-module configurations.
struct Scenario {
  int version = 1;
  std::vector<Point2> waypoints;
  std::vector<CornerSpec> corners;
  std::vector<Obstacle> obstacles;
  VehicleConfig vehicle;
  PlannerSettings planner;
  AccSettings acc;
  StanleySettings stanley;
  SimSettings sim;
  std::uint64_t rng_seed = 0;

  // Cross-field checks (timing multiples, grid inside the road, footprint
  // coverage). Throws ParseError.
  void validate() const;
};

// Rectangle obstacle footprint sampled along its perimeter.
Obstacle make_box_obstacle(const Point2& center, double length, double width,
                           double heading, double point_spacing,
                           const Eigen::Vector2d& velocity);

// Parses scenario JSON. Unknown keys are rejected; missing sections keep the
// defaults above; the version field is required. Throws ParseError (with
// line/column for syntax errors).
Scenario parse_scenario(const std::string& text);

// Reads and parses a scenario file. Throws IoError / ParseError.
Scenario load_scenario(const std::string& path);

}  // namespace planner
