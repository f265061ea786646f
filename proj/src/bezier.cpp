#include "planner/bezier.hpp"

#include <algorithm>
#include <cmath>

#include "planner/arc_length.hpp"

namespace planner {

namespace {

constexpr double kBinom5[6] = {1, 5, 10, 10, 5, 1};
constexpr double kBinom4[5] = {1, 4, 6, 4, 1};
constexpr double kBinom3[4] = {1, 3, 3, 1};
constexpr double kBinom2[3] = {1, 2, 1};

void check_t(double t) {
  if (t < -1e-12 || t > 1.0 + 1e-12)
    throw ParameterOutOfRange("bezier parameter outside [0, 1]");
}

template <int N>
Point2 bernstein_sum(const Point2* pts, const double* binom, double t) {
  Point2 acc{0.0, 0.0};
  for (int i = 0; i <= N; ++i)
    acc += binom[i] * std::pow(1.0 - t, N - i) * std::pow(t, i) * pts[i];
  return acc;
}

}  // namespace

std::pair<double, double> leg_lengths(const CornerSpec& spec) {
  const double m1 = (spec.w2 - spec.w1).norm();
  const double m2 = (spec.w3 - spec.w2).norm();
  if (m1 <= 1e-6 || m2 <= 1e-6)
    throw DegenerateLeg("leg_lengths: corner leg shorter than 1e-6 m");
  return {m1, m2};
}

QuinticBezier control_points(const CornerSpec& spec) {
  const auto [m1, m2] = leg_lengths(spec);
  if (!(spec.d1 >= 0.0 && spec.d1 <= spec.d2 && spec.d2 <= spec.d3))
    throw Error("control_points: distances must satisfy 0 <= d1 <= d2 <= d3");
  if (spec.d3 >= m1 || spec.d3 >= m2)
    throw DistanceExceedsLeg("control_points: d3 must be shorter than both legs");

  const Point2 u1 = (spec.w2 - spec.w1) / m1;
  const Point2 u2 = (spec.w3 - spec.w2) / m2;
  QuinticBezier b;
  b.control_points[0] = spec.w2 - spec.d3 * u1;
  b.control_points[1] = spec.w2 - spec.d2 * u1;
  b.control_points[2] = spec.w2 - spec.d1 * u1;
  b.control_points[3] = spec.w2 + spec.d1 * u2;
  b.control_points[4] = spec.w2 + spec.d2 * u2;
  b.control_points[5] = spec.w2 + spec.d3 * u2;
  return b;
}

Point2 eval_bezier(const QuinticBezier& b, double t) {
  check_t(t);
  return bernstein_sum<5>(b.control_points.data(), kBinom5, t);
}

Point2 bezier_derivative(const QuinticBezier& b, double t, int order) {
  check_t(t);
  const auto& p = b.control_points;
  if (order == 1) {
    Point2 d[5];
    for (int i = 0; i < 5; ++i) d[i] = p[i + 1] - p[i];
    return 5.0 * bernstein_sum<4>(d, kBinom4, t);
  }
  if (order == 2) {
    Point2 d[4];
    for (int i = 0; i < 4; ++i) d[i] = p[i + 2] - 2.0 * p[i + 1] + p[i];
    return 20.0 * bernstein_sum<3>(d, kBinom3, t);
  }
  if (order == 3) {
    Point2 d[3];
    for (int i = 0; i < 3; ++i)
      d[i] = p[i + 3] - 3.0 * p[i + 2] + 3.0 * p[i + 1] - p[i];
    return 60.0 * bernstein_sum<2>(d, kBinom2, t);
  }
  throw ParameterOutOfRange("bezier_derivative: order must be 1..3");
}

ContinuityReport continuity_report(const ReferenceLine& line) {
  const auto& pts = line.points;
  if (pts.size() < 3) throw TooFewPoints("continuity_report: need >= 3 points");

  ContinuityReport rep;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const PathPoint& a = pts[i];
    const PathPoint& b = pts[i + 1];
    const double ds = std::max(b.s - a.s, 1e-12);

    const double dh = std::abs(wrap_angle(b.heading - a.heading));
    const Point2 na{-std::sin(a.heading), std::cos(a.heading)};
    const Point2 nb{-std::sin(b.heading), std::cos(b.heading)};
    const double d2 = (b.curvature * nb - a.curvature * na).norm();
    const double dk = std::abs(b.curvature - a.curvature);

    rep.heading_jump = std::max(rep.heading_jump, dh);
    rep.second_derivative_jump = std::max(rep.second_derivative_jump, d2);
    rep.curvature_jump = std::max(rep.curvature_jump, dk);
    rep.heading_rate = std::max(rep.heading_rate, dh / ds);
    rep.second_derivative_rate = std::max(rep.second_derivative_rate, d2 / ds);
    rep.curvature_rate = std::max(rep.curvature_rate, dk / ds);
  }
  return rep;
}

ReferenceLine smooth_corners(const ReferenceLine& line,
                             const std::vector<CornerSpec>& corners,
                             double sample_step) {
  if (corners.empty()) return line;
  if (line.points.size() < 2) throw EmptyPath("smooth_corners: reference line has < 2 points");

  struct Splice {
    double l_start, l_end;
    QuinticBezier bezier;
  };
  std::vector<Splice> splices;
  splices.reserve(corners.size());
  for (const CornerSpec& corner : corners) {
    Splice sp;
    sp.bezier = control_points(corner);
    const FrenetState f0 = project_to_frenet(line, sp.bezier.control_points[0]);
    const FrenetState f5 = project_to_frenet(line, sp.bezier.control_points[5]);
    if (std::abs(f0.d) > 0.05 || std::abs(f5.d) > 0.05)
      throw CornerOffLine("smooth_corners: bezier endpoints do not lie on the line");
    if (f0.l >= f5.l)
      throw CornerOffLine("smooth_corners: corner is inverted relative to line direction");
    sp.l_start = f0.l;
    sp.l_end = f5.l;
    splices.push_back(sp);
  }
  std::sort(splices.begin(), splices.end(),
            [](const Splice& a, const Splice& b) { return a.l_start < b.l_start; });
  for (size_t i = 0; i + 1 < splices.size(); ++i)
    if (splices[i + 1].l_start <= splices[i].l_end)
      throw OverlappingCorners("smooth_corners: corner arcs overlap");

  std::vector<Point2> out;
  out.reserve(line.points.size());
  auto push = [&out](const Point2& p) {
    if (out.empty() || (p - out.back()).norm() > 1e-9) out.push_back(p);
  };

  size_t cursor = 0;
  for (const Splice& sp : splices) {
    while (cursor < line.points.size() && line.points[cursor].s < sp.l_start - 1e-9)
      push(line.points[cursor++].position);

    ArcLengthTable table([&](double t) { return eval_bezier(sp.bezier, t); },
                         {0.0, 1.0});
    const double len = table.total();
    const int n = std::max(1, static_cast<int>(std::llround(len / sample_step)));
    for (int j = 0; j <= n; ++j)
      push(eval_bezier(sp.bezier, table.parameter_at(len * j / n)));

    while (cursor < line.points.size() && line.points[cursor].s <= sp.l_end + 1e-9)
      ++cursor;
  }
  while (cursor < line.points.size()) push(line.points[cursor++].position);

  return make_reference_line(out, line.spacing);
}

}  // namespace planner
