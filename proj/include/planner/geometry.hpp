#pragma once

#include <Eigen/Dense>
#include <vector>

#include "planner/errors.hpp"

namespace planner {

using Point2 = Eigen::Vector2d;

// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

// z-component of the 2D cross product a x b.
inline double cross2(const Point2& a, const Point2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// A pose sample on an arc-length-parameterized path. Curvature is signed,
// left turn positive.
struct PathPoint {
  Point2 position{0.0, 0.0};
  double heading = 0.0;    // rad, tangent angle in (-pi, pi]
  double curvature = 0.0;  // 1/m
  double s = 0.0;          // m, cumulative arc length
};

// Curvilinear state relative to a reference line. l is the station along
// the line; d is the lateral offset, positive left of the tangent. d_dot
// and d_ddot are derivatives of d with respect to l (not time).
struct FrenetState {
  double l = 0.0;
  double d = 0.0;
  double d_dot = 0.0;
  double d_ddot = 0.0;
};

// Densely sampled path with per-point pose and curvature. `spacing` is the
// nominal gap between consecutive samples.
struct ReferenceLine {
  std::vector<PathPoint> points;
  double spacing = 0.0;

  double total_length() const { return points.empty() ? 0.0 : points.back().s; }
};

// Builds a ReferenceLine from positions alone: s from cumulative chord
// lengths, headings from central differences, curvature from circumscribed
// circles (endpoints copy their neighbor).
ReferenceLine make_reference_line(const std::vector<Point2>& positions,
                                  double nominal_spacing);

// Pose at station s by linear interpolation between bracketing samples
// (headings interpolated on the circle). s is clamped to [0, total_length].
PathPoint interpolate_at(const ReferenceLine& line, double s);

// Projects p onto the piecewise-linear path. Returns (l, d) with zero
// derivatives; d is positive when p lies left of the local tangent.
// Throws PointOutOfRange when p is farther than `horizon` from every sample.
FrenetState project_to_frenet(const ReferenceLine& line, const Point2& p,
                              double horizon = 100.0);

// Maps a Frenet state back to a Cartesian pose. Heading and curvature follow
// the standard offset formulas driven by d_dot/d_ddot.
// Throws StationOutOfRange / CurvatureSingularity (when d * kappa >= 1).
PathPoint frenet_to_cartesian(const ReferenceLine& line, const FrenetState& f);

// Signed curvature per point from three-point circumscribed circles.
// Endpoints copy the adjacent interior value.
std::vector<double> numeric_curvature(const std::vector<Point2>& pts);

}  // namespace planner
