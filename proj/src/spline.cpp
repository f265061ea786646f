#include "planner/spline.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "planner/arc_length.hpp"

namespace planner {

namespace {

// Natural cubic spline coefficients for values y over knots u. The second
// derivatives vanish at both ends; interior ones come from the standard
// tridiagonal system, solved by the Thomas algorithm.
std::vector<CubicSegment> fit_natural_1d(const std::vector<double>& u,
                                         const Eigen::VectorXd& y) {
  const int n = static_cast<int>(u.size()) - 1;  // segment count
  Eigen::VectorXd h(n);
  for (int i = 0; i < n; ++i) h(i) = u[i + 1] - u[i];

  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
  if (n >= 2) {
    const int m = n - 1;  // interior unknowns c_1..c_{n-1}
    Eigen::VectorXd diag(m), lower(m), upper(m), rhs(m);
    for (int i = 1; i <= m; ++i) {
      lower(i - 1) = h(i - 1);
      diag(i - 1) = 2.0 * (h(i - 1) + h(i));
      upper(i - 1) = h(i);
      rhs(i - 1) = 3.0 * ((y(i + 1) - y(i)) / h(i) - (y(i) - y(i - 1)) / h(i - 1));
    }
    for (int i = 1; i < m; ++i) {
      const double w = lower(i) / diag(i - 1);
      diag(i) -= w * upper(i - 1);
      rhs(i) -= w * rhs(i - 1);
    }
    Eigen::VectorXd sol(m);
    sol(m - 1) = rhs(m - 1) / diag(m - 1);
    for (int i = m - 2; i >= 0; --i)
      sol(i) = (rhs(i) - upper(i) * sol(i + 1)) / diag(i);
    c.segment(1, m) = sol;
  }

  std::vector<CubicSegment> segments(n);
  for (int i = 0; i < n; ++i) {
    CubicSegment& seg = segments[i];
    seg.a = y(i);
    seg.c = c(i);
    seg.b = (y(i + 1) - y(i)) / h(i) - h(i) / 3.0 * (c(i + 1) + 2.0 * c(i));
    seg.d = (c(i + 1) - c(i)) / (3.0 * h(i));
    seg.t0 = u[i];
    seg.t1 = u[i + 1];
  }
  return segments;
}

int locate_segment(const std::vector<double>& knots, double t) {
  auto it = std::upper_bound(knots.begin(), knots.end(), t);
  int i = static_cast<int>(it - knots.begin()) - 1;
  return std::clamp(i, 0, static_cast<int>(knots.size()) - 2);
}

constexpr double kParamSlack = 1e-9;

void check_param(const ParametricSpline& spline, double t) {
  if (t < spline.t_min() - kParamSlack || t > spline.t_max() + kParamSlack)
    throw ParameterOutOfRange("spline parameter outside knot span");
}

}  // namespace

ParametricSpline fit_spline(const std::vector<Point2>& waypoints) {
  const int n = static_cast<int>(waypoints.size());
  if (n < 3) throw TooFewPoints("fit_spline: need >= 3 waypoints");

  ParametricSpline spline;
  spline.knots.resize(n);
  spline.knots[0] = 0.0;
  for (int i = 1; i < n; ++i) {
    const double chord = (waypoints[i] - waypoints[i - 1]).norm();
    if (chord <= 1e-9) throw DuplicateWaypoint("fit_spline: consecutive waypoints coincide");
    spline.knots[i] = spline.knots[i - 1] + chord;
  }

  Eigen::VectorXd xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs(i) = waypoints[i].x();
    ys(i) = waypoints[i].y();
  }
  spline.x_segments = fit_natural_1d(spline.knots, xs);
  spline.y_segments = fit_natural_1d(spline.knots, ys);
  return spline;
}

Point2 eval(const ParametricSpline& spline, double t) {
  check_param(spline, t);
  const int i = locate_segment(spline.knots, t);
  return {spline.x_segments[i].value(t), spline.y_segments[i].value(t)};
}

Point2 eval_derivative(const ParametricSpline& spline, double t, int order) {
  check_param(spline, t);
  const int i = locate_segment(spline.knots, t);
  if (order == 1)
    return {spline.x_segments[i].deriv1(t), spline.y_segments[i].deriv1(t)};
  if (order == 2)
    return {spline.x_segments[i].deriv2(t), spline.y_segments[i].deriv2(t)};
  throw ParameterOutOfRange("eval_derivative: order must be 1 or 2");
}

double arc_length(const ParametricSpline& spline, double tol) {
  ArcLengthTable table([&](double t) { return eval(spline, t); }, spline.knots, tol);
  return table.total();
}

ReferenceLine resample_uniform(const ParametricSpline& spline, double step) {
  ArcLengthTable table([&](double t) { return eval(spline, t); }, spline.knots);
  const double total = table.total();
  if (step <= 0.0 || step >= total)
    throw StepTooLarge("resample_uniform: step must be in (0, total arc length)");

  const int count = static_cast<int>(std::floor(total / step + 1e-9)) + 1;
  ReferenceLine line;
  line.spacing = step;
  line.points.resize(count);
  double s_out = 0.0;
  for (int k = 0; k < count; ++k) {
    const double t = std::clamp(table.parameter_at(k * step), spline.t_min(), spline.t_max());
    PathPoint& p = line.points[k];
    p.position = eval(spline, t);
    const Point2 d1 = eval_derivative(spline, t, 1);
    const Point2 d2 = eval_derivative(spline, t, 2);
    p.heading = std::atan2(d1.y(), d1.x());
    const double speed2 = d1.squaredNorm();
    p.curvature = speed2 > 0.0 ? cross2(d1, d2) / (speed2 * std::sqrt(speed2)) : 0.0;
    if (k > 0) s_out += (p.position - line.points[k - 1].position).norm();
    p.s = s_out;
  }
  return line;
}

}  // namespace planner
