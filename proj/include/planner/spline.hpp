#pragma once

#include <vector>

#include "planner/geometry.hpp"

namespace planner {

// One piece of a cubic spline: f(t) = a + b*dt + c*dt^2 + d*dt^3, dt = t - t0.
struct CubicSegment {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  double t0 = 0.0, t1 = 0.0;

  double value(double t) const {
    const double dt = t - t0;
    return a + dt * (b + dt * (c + dt * d));
  }
  double deriv1(double t) const {
    const double dt = t - t0;
    return b + dt * (2.0 * c + dt * 3.0 * d);
  }
  double deriv2(double t) const { return 2.0 * c + 6.0 * d * (t - t0); }
};

// Planar natural cubic spline x(t), y(t) with chord-length knots. Both
// coordinate splines share the knot vector and are C2 at interior knots.
struct ParametricSpline {
  std::vector<CubicSegment> x_segments;
  std::vector<CubicSegment> y_segments;
  std::vector<double> knots;

  double t_min() const { return knots.front(); }
  double t_max() const { return knots.back(); }
};

// Fits a natural parametric cubic spline through the waypoints.
// Throws TooFewPoints (< 3) and DuplicateWaypoint (chord < 1e-9).
ParametricSpline fit_spline(const std::vector<Point2>& waypoints);

// Position on the spline. Throws ParameterOutOfRange outside the knot span.
Point2 eval(const ParametricSpline& spline, double t);
// First or second derivative with respect to the parameter (order 1 or 2).
Point2 eval_derivative(const ParametricSpline& spline, double t, int order);

// Total arc length by adaptive chord subdivision (tolerance in meters).
double arc_length(const ParametricSpline& spline, double tol = 1e-6);

// Resamples the spline at uniform arc-length steps. Output headings and
// curvatures come from spline derivatives; s is the cumulative chord length
// of the emitted polyline. Throws StepTooLarge.
ReferenceLine resample_uniform(const ParametricSpline& spline, double step);

}  // namespace planner
