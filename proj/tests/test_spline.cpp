#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "planner/spline.hpp"

using namespace planner;

namespace {

// Dense-chord arc length between two parameters, the independent oracle for
// the adaptive subdivision.
double fine_chord_arc(const ParametricSpline& spline, double t0, double t1,
                      double dt) {
  double acc = 0.0;
  Point2 prev = eval(spline, t0);
  for (double t = t0 + dt; t < t1; t += dt) {
    const Point2 cur = eval(spline, t);
    acc += (cur - prev).norm();
    prev = cur;
  }
  acc += (eval(spline, t1) - prev).norm();
  return acc;
}

std::vector<Point2> circle_waypoints(double radius, double arc, double step) {
  std::vector<Point2> pts;
  for (double phi = 0.0; phi <= arc + 1e-12; phi += step / radius)
    pts.push_back({radius * std::cos(phi), radius * std::sin(phi)});
  return pts;
}

}  // namespace

TEST_CASE("fitting collinear data yields linear segments") {
  const std::vector<Point2> pts = {{0.0, 0.0}, {1.0, 2.0}, {2.5, 5.0}, {4.0, 8.0}};
  const ParametricSpline spline = fit_spline(pts);

  const double b0 = spline.y_segments[0].b;
  for (const CubicSegment& seg : spline.y_segments) {
    CHECK(std::abs(seg.c) < 1e-9);
    CHECK(std::abs(seg.d) < 1e-9);
    CHECK(seg.b == doctest::Approx(b0).epsilon(1e-9));
  }
  for (const CubicSegment& seg : spline.x_segments) {
    CHECK(std::abs(seg.c) < 1e-9);
    CHECK(std::abs(seg.d) < 1e-9);
  }
}

TEST_CASE("three-point fit matches the hand-solved tridiagonal system") {
  const std::vector<Point2> pts = {{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}};
  const ParametricSpline spline = fit_spline(pts);

  // Independent oracle: the single interior second-derivative unknown of the
  // y spline, solved by hand Gaussian elimination of the 1x1 system
  //   2(h0 + h1) c1 = 3((y2 - y1)/h1 - (y1 - y0)/h0),
  // then f''(u1) = 2 c1.
  const double h0 = spline.knots[1] - spline.knots[0];
  const double h1 = spline.knots[2] - spline.knots[1];
  const double rhs = 3.0 * ((0.0 - 1.0) / h1 - (1.0 - 0.0) / h0);
  const double c1_oracle = rhs / (2.0 * (h0 + h1));

  CHECK(spline.y_segments[1].c == doctest::Approx(c1_oracle).epsilon(1e-12));
  CHECK(eval_derivative(spline, spline.knots[1], 2).y() ==
        doctest::Approx(2.0 * c1_oracle).epsilon(1e-12));

  for (size_t i = 0; i < pts.size(); ++i) {
    const Point2 p = eval(spline, spline.knots[i]);
    CHECK((p - pts[i]).norm() < 1e-12);
  }
}

TEST_CASE("interpolating sin(x) reproduces the function at midpoints") {
  std::vector<Point2> pts;
  for (double x = 0.0; x <= 2.0 * M_PI + 1e-12; x += M_PI / 8.0)
    pts.push_back({x, std::sin(x)});
  const ParametricSpline spline = fit_spline(pts);

  double max_err = 0.0;
  for (size_t i = 0; i + 1 < spline.knots.size(); ++i) {
    const double tm = 0.5 * (spline.knots[i] + spline.knots[i + 1]);
    const Point2 p = eval(spline, tm);
    max_err = std::max(max_err, std::abs(p.y() - std::sin(p.x())));
  }
  CHECK(max_err < 1e-3);
}

TEST_CASE("fit errors") {
  CHECK_THROWS_AS(fit_spline({{0.0, 0.0}, {1.0, 0.0}}), TooFewPoints);
  CHECK_THROWS_AS(fit_spline({{0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}), DuplicateWaypoint);
}

TEST_CASE("interpolation, C2 continuity and natural ends on random data") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dx(0.5, 2.0), dy(-1.5, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point2> pts{{0.0, 0.0}};
    const int n = 3 + static_cast<int>(rng() % 12);
    for (int i = 1; i < n; ++i)
      pts.push_back(pts.back() + Point2{dx(rng), dy(rng)});
    const ParametricSpline spline = fit_spline(pts);

    for (size_t i = 0; i < pts.size(); ++i)
      CHECK((eval(spline, spline.knots[i]) - pts[i]).norm() < 1e-9);

    for (size_t i = 0; i + 1 < spline.x_segments.size(); ++i) {
      const double knot = spline.knots[i + 1];
      for (const auto* segs : {&spline.x_segments, &spline.y_segments}) {
        const CubicSegment& a = (*segs)[i];
        const CubicSegment& b = (*segs)[i + 1];
        const double scale = std::max({1.0, std::abs(a.value(knot))});
        CHECK(std::abs(a.value(knot) - b.value(knot)) / scale < 1e-9);
        CHECK(std::abs(a.deriv1(knot) - b.deriv1(knot)) < 1e-9 * std::max(1.0, std::abs(a.deriv1(knot))));
        CHECK(std::abs(a.deriv2(knot) - b.deriv2(knot)) < 1e-9 * std::max(1.0, std::abs(a.deriv2(knot))));
      }
    }

    CHECK(std::abs(eval_derivative(spline, spline.t_min(), 2).x()) < 1e-9);
    CHECK(std::abs(eval_derivative(spline, spline.t_min(), 2).y()) < 1e-9);
    CHECK(std::abs(eval_derivative(spline, spline.t_max(), 2).x()) < 1e-9);
    CHECK(std::abs(eval_derivative(spline, spline.t_max(), 2).y()) < 1e-9);
  }
}

TEST_CASE("eval endpoints and parameter validation") {
  const std::vector<Point2> pts = {{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}, {3.0, 1.0}};
  const ParametricSpline spline = fit_spline(pts);

  CHECK((eval(spline, spline.t_min()) - pts.front()).norm() < 1e-12);
  CHECK((eval(spline, spline.t_max()) - pts.back()).norm() < 1e-12);
  CHECK_THROWS_AS(eval(spline, spline.t_max() + 0.5), ParameterOutOfRange);
  CHECK_THROWS_AS(eval(spline, spline.t_min() - 0.5), ParameterOutOfRange);
  CHECK_THROWS_AS(eval_derivative(spline, 0.0, 3), ParameterOutOfRange);
}

TEST_CASE("derivative continuity at interior knots from fitted coefficients") {
  const std::vector<Point2> pts = {{0.0, 0.0}, {2.0, 1.5}, {3.5, -0.5}, {6.0, 2.0}};
  const ParametricSpline spline = fit_spline(pts);
  for (size_t i = 1; i + 1 < spline.knots.size(); ++i) {
    const double knot = spline.knots[i];
    const Point2 left{spline.x_segments[i - 1].deriv1(knot),
                      spline.y_segments[i - 1].deriv1(knot)};
    const Point2 right{spline.x_segments[i].deriv1(knot),
                       spline.y_segments[i].deriv1(knot)};
    CHECK((left - right).norm() < 1e-9);
  }
}

TEST_CASE("resampling a straight spline of length 10 with step 1") {
  const ParametricSpline spline = fit_spline({{0.0, 0.0}, {4.0, 0.0}, {10.0, 0.0}});
  const ReferenceLine line = resample_uniform(spline, 1.0);

  REQUIRE(line.points.size() == 11);
  for (int i = 0; i < 11; ++i) {
    CHECK(line.points[i].position.x() == doctest::Approx(double(i)).epsilon(1e-9));
    CHECK(std::abs(line.points[i].position.y()) < 1e-12);
    CHECK(std::abs(line.points[i].curvature) < 1e-12);
    CHECK(std::abs(line.points[i].heading) < 1e-12);
  }
}

TEST_CASE("dense resampling keeps 0.01 m gaps within 1%") {
  const std::vector<Point2> pts = {{0.0, 0.0}, {3.0, 0.2}, {6.0, 1.5}, {8.0, 3.0}};
  const ReferenceLine line = resample_uniform(fit_spline(pts), 0.01);
  for (size_t i = 1; i < line.points.size(); ++i) {
    const double gap = (line.points[i].position - line.points[i - 1].position).norm();
    CHECK(gap > 0.0099);
    CHECK(gap < 0.0101);
  }
}

TEST_CASE("circle-arc resampling gaps verified by the fine-chord oracle") {
  const ParametricSpline spline = fit_spline(circle_waypoints(10.0, 1.5, 0.5));
  const ReferenceLine line = resample_uniform(spline, 0.1);

  for (size_t i = 1; i < line.points.size(); ++i) {
    const double gap = (line.points[i].position - line.points[i - 1].position).norm();
    CHECK(gap >= 0.099);
    CHECK(gap <= 0.101);
  }

  // Total arc from 1e-4-resolution chords agrees with count * step.
  const double total = fine_chord_arc(spline, spline.t_min(), spline.t_max(), 1e-4 / 10.0);
  const double sampled_span = 0.1 * (line.points.size() - 1);
  CHECK(sampled_span <= total + 1e-6);
  CHECK(total - sampled_span < 0.1 + 1e-6);
}

TEST_CASE("resampling rejects out-of-range steps") {
  const ParametricSpline spline = fit_spline({{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}});
  CHECK_THROWS_AS(resample_uniform(spline, 0.0), StepTooLarge);
  CHECK_THROWS_AS(resample_uniform(spline, 5.0), StepTooLarge);
}

TEST_CASE("collinear input resamples to collinear output") {
  const ParametricSpline spline =
      fit_spline({{0.0, 0.0}, {1.0, 0.5}, {3.0, 1.5}, {8.0, 4.0}});
  const ReferenceLine line = resample_uniform(spline, 0.25);
  for (size_t i = 2; i < line.points.size(); ++i) {
    const Point2 u = line.points[i - 1].position - line.points[i - 2].position;
    const Point2 v = line.points[i].position - line.points[i - 1].position;
    CHECK(std::abs(cross2(u, v)) < 1e-9);
  }
}

TEST_CASE("arc_length agrees with the fine-chord oracle") {
  const ParametricSpline spline = fit_spline(circle_waypoints(5.0, 2.0, 0.4));
  const double adaptive = arc_length(spline);
  const double oracle = fine_chord_arc(spline, spline.t_min(), spline.t_max(), 1e-4);
  CHECK(adaptive == doctest::Approx(oracle).epsilon(1e-5));
}
