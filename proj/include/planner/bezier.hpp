#pragma once

#include <array>
#include <vector>

#include "planner/geometry.hpp"

namespace planner {

// Fifth-order Bezier curve on t in [0, 1].
struct QuinticBezier {
  std::array<Point2, 6> control_points;
};

// Corner smoother input: three anchor waypoints (entry, vertex, exit) and the
// control-point distances from the vertex along each leg.
struct CornerSpec {
  Point2 w1{0.0, 0.0};
  Point2 w2{0.0, 0.0};
  Point2 w3{0.0, 0.0};
  double d1 = 3.0;
  double d2 = 3.0;
  double d3 = 8.0;
};

// Euclidean lengths of the two corner legs (w1->w2, w2->w3).
// Throws DegenerateLeg when either is shorter than 1e-6 m.
std::pair<double, double> leg_lengths(const CornerSpec& spec);

// Places the six control points: P0..P2 on the entry leg at distances
// (d3, d2, d1) before the vertex, P3..P5 on the exit leg at (d1, d2, d3)
// past it. The collinear end triples give tangent continuity and zero
// curvature at both curve ends.
QuinticBezier control_points(const CornerSpec& spec);

// Bernstein-weighted position at t in [0, 1].
Point2 eval_bezier(const QuinticBezier& b, double t);
// Derivative of order 1..3 with respect to t, via control-point differences.
Point2 bezier_derivative(const QuinticBezier& b, double t, int order);

// Maximum consecutive-sample jumps along a reference line, both raw and
// divided by the local sample gap. "Second derivative" is the vector
// d^2 p / ds^2 = curvature * normal.
struct ContinuityReport {
  double heading_jump = 0.0;            // rad
  double second_derivative_jump = 0.0;  // 1/m
  double curvature_jump = 0.0;          // 1/m
  double heading_rate = 0.0;            // rad/m
  double second_derivative_rate = 0.0;  // 1/m^2
  double curvature_rate = 0.0;          // 1/m^2
};

ContinuityReport continuity_report(const ReferenceLine& line);

// Replaces the stretch of `line` between each corner's P0 and P5 with the
// arc-uniformly sampled Bezier curve, then rebuilds s/heading/curvature for
// the spliced polyline. Corners must project onto the line within 0.05 m and
// must not overlap.
ReferenceLine smooth_corners(const ReferenceLine& line,
                             const std::vector<CornerSpec>& corners,
                             double sample_step);

}  // namespace planner
