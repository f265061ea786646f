#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "planner/bezier.hpp"

using namespace planner;

namespace {

// Independent evaluation oracle: de Casteljau's algorithm.
Point2 de_casteljau(std::array<Point2, 6> pts, double t) {
  for (int level = 5; level > 0; --level)
    for (int i = 0; i < level; ++i) pts[i] = (1.0 - t) * pts[i] + t * pts[i + 1];
  return pts[0];
}

// Right-angle polyline with the corner at (30, 0), sampled at `step`.
ReferenceLine right_angle_line(double step) {
  std::vector<Point2> pts;
  for (double x = 0.0; x < 30.0; x += step) pts.push_back({x, 0.0});
  for (double y = 0.0; y <= 30.0 + 1e-12; y += step) pts.push_back({30.0, y});
  return make_reference_line(pts, step);
}

CornerSpec right_angle_corner() {
  CornerSpec c;
  c.w1 = {0.0, 0.0};
  c.w2 = {30.0, 0.0};
  c.w3 = {30.0, 30.0};
  return c;  // default d = (3, 3, 8)
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
  });
  std::vector<Point2> hull(2 * pts.size());
  size_t k = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  const size_t lower = k + 1;
  for (size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

bool inside_hull(const std::vector<Point2>& hull, const Point2& p, double tol) {
  for (size_t i = 0; i < hull.size(); ++i) {
    const Point2& a = hull[i];
    const Point2& b = hull[(i + 1) % hull.size()];
    if (cross2(b - a, p - a) < -tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("leg lengths") {
  CornerSpec c;
  c.w1 = {0.0, 0.0};
  c.w2 = {3.0, 4.0};
  c.w3 = {3.0, 9.0};
  const auto [m1, m2] = leg_lengths(c);
  CHECK(m1 == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(m2 == doctest::Approx(5.0).epsilon(1e-12));

  c.w1 = c.w2;
  CHECK_THROWS_AS(leg_lengths(c), DegenerateLeg);

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> coord(-20.0, 20.0);
  for (int i = 0; i < 50; ++i) {
    CornerSpec r;
    r.w1 = {coord(rng), coord(rng)};
    r.w2 = {coord(rng), coord(rng)};
    r.w3 = {coord(rng), coord(rng)};
    if ((r.w2 - r.w1).norm() < 1e-3 || (r.w3 - r.w2).norm() < 1e-3) continue;
    const auto [a, b] = leg_lengths(r);
    CHECK(a == doctest::Approx((r.w2 - r.w1).norm()).epsilon(1e-12));
    CHECK(b == doctest::Approx((r.w3 - r.w2).norm()).epsilon(1e-12));
  }
}

TEST_CASE("control point placement on the right-angle corner") {
  CornerSpec c;
  c.w1 = {0.0, 0.0};
  c.w2 = {10.0, 0.0};
  c.w3 = {10.0, 10.0};
  c.d1 = 3.0;
  c.d2 = 3.0;
  c.d3 = 8.0;
  const QuinticBezier b = control_points(c);
  const Point2 expect[6] = {{2.0, 0.0}, {7.0, 0.0}, {7.0, 0.0},
                            {10.0, 3.0}, {10.0, 3.0}, {10.0, 8.0}};
  for (int i = 0; i < 6; ++i)
    CHECK((b.control_points[i] - expect[i]).norm() < 1e-12);
}

TEST_CASE("zero distances collapse all control points onto the corner") {
  CornerSpec c;
  c.w1 = {0.0, 0.0};
  c.w2 = {4.0, 1.0};
  c.w3 = {8.0, 5.0};
  c.d1 = c.d2 = c.d3 = 0.0;
  const QuinticBezier b = control_points(c);
  for (const Point2& p : b.control_points) CHECK((p - c.w2).norm() < 1e-12);
}

TEST_CASE("collinear anchors produce a straight curve") {
  CornerSpec c;
  c.w1 = {0.0, 0.0};
  c.w2 = {10.0, 5.0};
  c.w3 = {20.0, 10.0};
  c.d1 = 1.0;
  c.d2 = 2.0;
  c.d3 = 4.0;
  const QuinticBezier b = control_points(c);
  const Point2 dir = (c.w3 - c.w1).normalized();
  for (double t = 0.0; t <= 1.0; t += 0.05)
    CHECK(std::abs(cross2(dir, eval_bezier(b, t) - c.w1)) < 1e-9);
}

TEST_CASE("distance exceeding a leg is rejected") {
  CornerSpec c;
  c.w1 = {0.0, 0.0};
  c.w2 = {5.0, 0.0};
  c.w3 = {5.0, 20.0};
  c.d1 = 3.0;
  c.d2 = 3.0;
  c.d3 = 8.0;  // longer than the 5 m entry leg
  CHECK_THROWS_AS(control_points(c), DistanceExceedsLeg);
}

TEST_CASE("bezier endpoints, constant curve and parameter validation") {
  const QuinticBezier b = control_points(right_angle_corner());
  CHECK((eval_bezier(b, 0.0) - b.control_points[0]).norm() < 1e-12);
  CHECK((eval_bezier(b, 1.0) - b.control_points[5]).norm() < 1e-12);
  CHECK_THROWS_AS(eval_bezier(b, -0.1), ParameterOutOfRange);
  CHECK_THROWS_AS(eval_bezier(b, 1.1), ParameterOutOfRange);
  CHECK_THROWS_AS(bezier_derivative(b, 0.5, 4), ParameterOutOfRange);

  QuinticBezier constant;
  constant.control_points.fill({2.0, -1.0});
  for (double t = 0.0; t <= 1.0; t += 0.1) {
    CHECK((eval_bezier(constant, t) - Point2{2.0, -1.0}).norm() < 1e-12);
    for (int order = 1; order <= 3; ++order)
      CHECK(bezier_derivative(constant, t, order).norm() < 1e-12);
  }
}

TEST_CASE("evaluation matches the de Casteljau oracle") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    QuinticBezier b;
    for (Point2& p : b.control_points) p = {coord(rng), coord(rng)};
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0})
      CHECK((eval_bezier(b, t) - de_casteljau(b.control_points, t)).norm() < 1e-12);
  }
}

TEST_CASE("derivatives match central finite differences") {
  const QuinticBezier b = control_points(right_angle_corner());
  const double h = 1e-6;
  for (double t : {0.2, 0.5, 0.8}) {
    const Point2 d1 = bezier_derivative(b, t, 1);
    const Point2 fd1 = (eval_bezier(b, t + h) - eval_bezier(b, t - h)) / (2.0 * h);
    CHECK((d1 - fd1).norm() < 1e-5);

    const Point2 d2 = bezier_derivative(b, t, 2);
    const Point2 fd2 = (bezier_derivative(b, t + h, 1) - bezier_derivative(b, t - h, 1)) / (2.0 * h);
    CHECK((d2 - fd2).norm() < 1e-4);

    const Point2 d3 = bezier_derivative(b, t, 3);
    const Point2 fd3 = (bezier_derivative(b, t + h, 2) - bezier_derivative(b, t - h, 2)) / (2.0 * h);
    CHECK((d3 - fd3).norm() < 1e-3);
  }
}

TEST_CASE("endpoint tangency and zero end curvature") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> coord(-30.0, 30.0);
  int tested = 0;
  while (tested < 20) {
    CornerSpec c;
    c.w1 = {coord(rng), coord(rng)};
    c.w2 = {coord(rng), coord(rng)};
    c.w3 = {coord(rng), coord(rng)};
    c.d1 = 1.0;
    c.d2 = 2.0;
    c.d3 = 5.0;
    if ((c.w2 - c.w1).norm() <= c.d3 + 0.5 || (c.w3 - c.w2).norm() <= c.d3 + 0.5)
      continue;
    ++tested;
    const QuinticBezier b = control_points(c);

    const Point2 u1 = (c.w2 - c.w1).normalized();
    const Point2 u2 = (c.w3 - c.w2).normalized();
    const Point2 t0 = bezier_derivative(b, 0.0, 1).normalized();
    const Point2 t1 = bezier_derivative(b, 1.0, 1).normalized();
    CHECK(std::abs(cross2(t0, u1)) < 1e-9);
    CHECK(std::abs(cross2(t1, u2)) < 1e-9);

    for (double t : {0.0, 1.0}) {
      const Point2 d1 = bezier_derivative(b, t, 1);
      const Point2 d2 = bezier_derivative(b, t, 2);
      const double kappa = std::abs(cross2(d1, d2)) / std::pow(d1.norm(), 3);
      CHECK(kappa < 1e-9);
    }
  }
}

TEST_CASE("sampled curve stays inside the control-point convex hull") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  for (int trial = 0; trial < 10; ++trial) {
    QuinticBezier b;
    std::vector<Point2> pts;
    for (Point2& p : b.control_points) {
      p = {coord(rng), coord(rng)};
      pts.push_back(p);
    }
    const std::vector<Point2> hull = convex_hull(pts);
    if (hull.size() < 3) continue;
    for (double t = 0.0; t <= 1.0 + 1e-12; t += 0.02)
      CHECK(inside_hull(hull, eval_bezier(b, t), 1e-9));
  }
}

TEST_CASE("mirroring the corner mirrors the curve") {
  CornerSpec c = right_angle_corner();
  CornerSpec mirrored;  // swap entry and exit
  mirrored.w1 = c.w3;
  mirrored.w2 = c.w2;
  mirrored.w3 = c.w1;
  mirrored.d1 = c.d1;
  mirrored.d2 = c.d2;
  mirrored.d3 = c.d3;
  const QuinticBezier b = control_points(c);
  const QuinticBezier m = control_points(mirrored);
  for (double t = 0.0; t <= 1.0 + 1e-12; t += 0.05)
    CHECK((eval_bezier(b, t) - eval_bezier(m, 1.0 - t)).norm() < 1e-9);
}

TEST_CASE("continuity report flags the raw right angle") {
  const ReferenceLine raw = right_angle_line(0.01);
  const ContinuityReport rep = continuity_report(raw);
  CHECK(rep.heading_jump > 0.5);      // pi/2 heading break at the corner
  CHECK(rep.curvature_jump > 10.0);   // curvature spike from the kink
}

TEST_CASE("continuity report on a straight line is all zeros") {
  std::vector<Point2> pts;
  for (double x = 0.0; x <= 5.0; x += 0.05) pts.push_back({x, 0.0});
  const ContinuityReport rep = continuity_report(make_reference_line(pts, 0.05));
  CHECK(rep.heading_jump == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rep.second_derivative_jump == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rep.curvature_jump == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(continuity_report(ReferenceLine{}), TooFewPoints);
}

TEST_CASE("smoothing with no corners is the identity") {
  const ReferenceLine line = right_angle_line(0.05);
  const ReferenceLine out = smooth_corners(line, {}, 0.05);
  REQUIRE(out.points.size() == line.points.size());
  for (size_t i = 0; i < out.points.size(); ++i)
    CHECK((out.points[i].position - line.points[i].position).norm() < 1e-12);
}

TEST_CASE("smoothing the right-angle corner restores continuity") {
  const ReferenceLine line = right_angle_line(0.01);
  const ReferenceLine smooth = smooth_corners(line, {right_angle_corner()}, 0.01);

  const ContinuityReport rep = continuity_report(smooth);
  CHECK(rep.heading_jump < 0.01);
  CHECK(rep.curvature_jump < 0.05);
  CHECK(rep.second_derivative_jump < 0.05);

  // Splice continuity: consecutive sample gaps never exceed ~1.5x nominal.
  for (size_t i = 1; i < smooth.points.size(); ++i) {
    const double gap = (smooth.points[i].position - smooth.points[i - 1].position).norm();
    CHECK(gap < 0.02);
  }
}

TEST_CASE("a collinear corner leaves the line geometry unchanged") {
  std::vector<Point2> pts;
  for (double x = 0.0; x <= 40.0 + 1e-12; x += 0.1) pts.push_back({x, 0.0});
  const ReferenceLine line = make_reference_line(pts, 0.1);

  CornerSpec c;
  c.w1 = {0.0, 0.0};
  c.w2 = {20.0, 0.0};
  c.w3 = {40.0, 0.0};
  const ReferenceLine out = smooth_corners(line, {c}, 0.1);
  for (const PathPoint& p : out.points) {
    CHECK(std::abs(p.position.y()) < 1e-6);
    CHECK(p.position.x() >= -1e-9);
    CHECK(p.position.x() <= 40.0 + 1e-9);
  }
}

TEST_CASE("corner endpoints off the line are rejected") {
  const ReferenceLine line = right_angle_line(0.05);
  CornerSpec c = right_angle_corner();
  c.w2 = {30.0, 1.0};  // lifts P0/P5 off the polyline
  CHECK_THROWS_AS(smooth_corners(line, {c}, 0.05), CornerOffLine);
}

TEST_CASE("overlapping corners are rejected") {
  std::vector<Point2> pts;
  for (double x = 0.0; x <= 60.0 + 1e-12; x += 0.1) pts.push_back({x, 0.0});
  const ReferenceLine line = make_reference_line(pts, 0.1);

  CornerSpec a;
  a.w1 = {0.0, 0.0};
  a.w2 = {20.0, 0.0};
  a.w3 = {40.0, 0.0};
  CornerSpec b;
  b.w1 = {0.0, 0.0};
  b.w2 = {25.0, 0.0};
  b.w3 = {50.0, 0.0};
  CHECK_THROWS_AS(smooth_corners(line, {a, b}, 0.1), OverlappingCorners);
}
