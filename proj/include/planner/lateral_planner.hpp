#pragma once

#include <Eigen/Dense>
#include <limits>
#include <map>
#include <vector>

#include "planner/geometry.hpp"
#include "planner/kdtree.hpp"

namespace planner {

// Lateral offset profile d(l): a quintic in (l - l0) valid on [l0, le].
struct QuinticPolynomial {
  Eigen::Matrix<double, 6, 1> alpha = Eigen::Matrix<double, 6, 1>::Zero();
  double l0 = 0.0;
  double le = 0.0;

  double value(double l) const {
    const double x = l - l0;
    double acc = 0.0;
    for (int i = 5; i >= 0; --i) acc = acc * x + alpha[i];
    return acc;
  }
  double deriv1(double l) const {
    const double x = l - l0;
    double acc = 0.0;
    for (int i = 5; i >= 1; --i) acc = acc * x + i * alpha[i];
    return acc;
  }
  double deriv2(double l) const {
    const double x = l - l0;
    double acc = 0.0;
    for (int i = 5; i >= 2; --i) acc = acc * x + i * (i - 1) * alpha[i];
    return acc;
  }
};

// Closed-form quintic boundary-value solve: position, first and second
// derivative at both ends. Throws ZeroLength when ce.l - c0.l <= 1e-6.
QuinticPolynomial solve_quintic(const FrenetState& c0, const FrenetState& ce);

// Weights of the trajectory cost terms. Units are absorbed by the weights.
struct CostWeights {
  double w_s = 1.0;        // squared section lengths
  double w_k = 1.0;        // squared curvature
  double w_kdot = 1.0;     // squared curvature rate (d/ds)
  double w_kddot = 1.0;    // squared second curvature derivative
  double w_kdddot = 1.0;   // squared third curvature derivative
  double w_dcenter = 1.0;  // squared lateral offset to the reference line
  double w_alat = 1.0;     // squared lateral acceleration
  double w_alon = 1.0;     // squared longitudinal acceleration
  double w_alatdot = 1.0;  // squared lateral jerk
  double w_alondot = 1.0;  // squared longitudinal jerk
  double w_l = 0.5;        // squared offset difference to the previous plan
  double w_t = 0.1;        // squared per-section time durations
};

// End-state grid: lateral offsets [d_min, d_max] step delta_d crossed with
// candidate lengths [l_min, l_max] step delta_l.
struct SamplingGrid {
  double d_min = -4.0;
  double d_max = 4.0;
  double delta_d = 0.1;
  double l_min = 15.0;
  double l_max = 30.0;
  double delta_l = 0.2;
};

// Full Cartesian product of grid values, l outer and d inner, each end state
// with zero lateral derivatives. The returned l values are candidate lengths
// (relative to the start station). Throws EmptyGrid.
std::vector<FrenetState> sample_end_states(const SamplingGrid& grid);

struct TrajectorySample {
  PathPoint point;            // Cartesian pose; point.s carries the station l
  double l = 0.0;             // station along the reference line
  double d = 0.0;             // lateral offset
  double a_lat = 0.0;         // m/s^2, v^2 * curvature at constant speed
  double a_lon = 0.0;         // m/s^2
  double a_lat_rate = 0.0;    // m/s^3
  double a_lon_rate = 0.0;    // m/s^3
  double section_len = 0.0;   // m, chord from the previous sample (0 at first)
  double section_time = 0.0;  // s, section_len / speed
  double t = 0.0;             // s, cumulative time from trajectory start
};

struct CandidateTrajectory {
  QuinticPolynomial poly;
  std::vector<TrajectorySample> samples;
  double cost = 0.0;
  bool collision_checked = false;
  bool feasible = false;
  double min_clearance = std::numeric_limits<double>::infinity();
  // End-state identity within the sampling grid.
  double d_e = 0.0;
  double l_e = 0.0;  // candidate length
  int grid_index = -1;
};

// One obstacle: footprint sample points at the current time plus a constant
// velocity used for prediction.
struct Obstacle {
  std::vector<Point2> points;
  Eigen::Vector2d velocity{0.0, 0.0};
};

// Obstacle container with a per-cycle cache of kd-trees over the predicted
// point positions, one per distinct prediction time.
class ObstacleSet {
 public:
  ObstacleSet() = default;
  explicit ObstacleSet(std::vector<Obstacle> obstacles)
      : obstacles_(std::move(obstacles)) {}

  const std::vector<Obstacle>& obstacles() const { return obstacles_; }
  bool empty() const;

  // Clears the prediction cache; call once per planning cycle.
  void begin_cycle() const;
  // Kd-tree over all obstacle points advanced by t seconds. Throws
  // IndexNotBuilt unless begin_cycle() was called for this cycle.
  const KdTree& slice(double t) const;
  // Brute-force nearest distance at time t, for verification.
  double nearest_distance_brute(const Point2& q, double t) const;

 private:
  std::vector<Obstacle> obstacles_;
  mutable bool cycle_open_ = false;
  mutable std::map<double, KdTree> slices_;
};

// Circle cover of the vehicle footprint; offsets are along the longitudinal
// axis from the reference point (rear axle in the simulator).
struct FootprintCircles {
  struct Circle {
    double offset = 0.0;
    double radius = 1.0;
  };
  std::vector<Circle> circles;
  double safety_margin = 0.3;

  // Three circles sized so the corners of a length x width box centered on
  // the circle row are contained.
  static FootprintCircles cover_box(double length, double width,
                                    double safety_margin = 0.3);
};

// Throws Error when some corner of the box is outside every circle.
void validate_covers_box(const FootprintCircles& fp, double length, double width);

struct CollisionResult {
  bool feasible = true;
  double min_clearance = std::numeric_limits<double>::infinity();
};

// Checks the trajectory against constant-velocity obstacle predictions.
// A sample is in collision when any footprint circle's nearest obstacle
// point is closer than radius + safety_margin. min_clearance is the
// smallest (distance - radius) encountered before the first violation.
CollisionResult check_collision(const CandidateTrajectory& traj,
                                const ObstacleSet& obstacles,
                                const FootprintCircles& footprint,
                                double horizon);

// check_collision plus the commitment tail: the vehicle keeps driving at the
// candidate's terminal offset [d_e, 0, 0] along the reference after the end
// station, so the check continues there until the time horizon (or the end
// of the reference line). Without the tail a short candidate never sees a
// lead vehicle beyond its own end station.
CollisionResult check_collision_extended(const CandidateTrajectory& traj,
                                         const ReferenceLine& reference,
                                         double speed, double sample_dl,
                                         const ObstacleSet& obstacles,
                                         const FootprintCircles& footprint,
                                         double horizon);

// Samples the quintic between c0 and the end state along the reference line
// and fills per-sample kinematics at the given constant speed. `length` is
// clamped to the remaining reference line.
CandidateTrajectory build_candidate(const ReferenceLine& reference,
                                    const FrenetState& c0, double d_e,
                                    double length, double speed,
                                    double sample_dl);

// Sum of the weighted squared cost terms over the candidate's samples.
// `previous` feeds the plan-consistency term; pass nullptr to drop it.
double evaluate_cost(const CandidateTrajectory& traj, const CostWeights& weights,
                     const CandidateTrajectory* previous);

struct CandidateSummary {
  int grid_index = -1;
  double l_e = 0.0;
  double d_e = 0.0;
  double cost = 0.0;
  bool checked = false;
  bool feasible = false;
  bool selected = false;
};

struct PlanDiagnostics {
  int candidate_count = 0;
  int checked_count = 0;
  int selected_grid_index = -1;
  std::vector<CandidateSummary> candidates;
};

struct PlanInput {
  FrenetState c0;
  SamplingGrid grid;
  CostWeights weights;
  const ReferenceLine* reference = nullptr;
  const ObstacleSet* obstacles = nullptr;
  FootprintCircles footprint;
  const CandidateTrajectory* previous = nullptr;
  double speed = 10.0;       // assumed constant speed along candidates, m/s
  double sample_dl = 0.5;    // station step between trajectory samples, m
  double horizon = 1e9;      // collision-checking time horizon, s
};

// Generates and costs every grid candidate, then collision-checks them in
// ascending cost order and returns the first feasible one. Throws
// NoFeasibleTrajectory when all candidates collide.
CandidateTrajectory plan(const PlanInput& input, PlanDiagnostics* diag = nullptr);

}  // namespace planner
