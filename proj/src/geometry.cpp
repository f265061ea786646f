#include "planner/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace planner {

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a > M_PI) a -= 2.0 * M_PI;
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

namespace {

// Index of the segment [i, i+1] whose s-range contains the station.
int segment_index(const ReferenceLine& line, double s) {
  const auto& pts = line.points;
  auto it = std::upper_bound(pts.begin(), pts.end(), s,
                             [](double v, const PathPoint& p) { return v < p.s; });
  int i = static_cast<int>(it - pts.begin()) - 1;
  return std::clamp(i, 0, static_cast<int>(pts.size()) - 2);
}

double lerp(double a, double b, double t) { return a + (b - a) * t; }

double lerp_angle(double a, double b, double t) {
  return wrap_angle(a + wrap_angle(b - a) * t);
}

}  // namespace

ReferenceLine make_reference_line(const std::vector<Point2>& positions,
                                  double nominal_spacing) {
  if (positions.size() < 2) throw TooFewPoints("make_reference_line: need >= 2 points");
  ReferenceLine line;
  line.spacing = nominal_spacing;
  line.points.resize(positions.size());
  const int n = static_cast<int>(positions.size());

  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i > 0) {
      const double ds = (positions[i] - positions[i - 1]).norm();
      if (ds < 1e-12) throw DegenerateSpacing("make_reference_line: duplicate consecutive points");
      s += ds;
    }
    line.points[i].position = positions[i];
    line.points[i].s = s;
  }
  for (int i = 0; i < n; ++i) {
    const Point2 a = positions[std::max(0, i - 1)];
    const Point2 b = positions[std::min(n - 1, i + 1)];
    line.points[i].heading = std::atan2(b.y() - a.y(), b.x() - a.x());
  }
  if (n >= 3) {
    const std::vector<double> kappa = numeric_curvature(positions);
    for (int i = 0; i < n; ++i) line.points[i].curvature = kappa[i];
  }
  return line;
}

PathPoint interpolate_at(const ReferenceLine& line, double s) {
  if (line.points.size() < 2) throw EmptyPath("interpolate_at: reference line has < 2 points");
  s = std::clamp(s, 0.0, line.total_length());
  const int i = segment_index(line, s);
  const PathPoint& a = line.points[i];
  const PathPoint& b = line.points[i + 1];
  const double t = (b.s > a.s) ? (s - a.s) / (b.s - a.s) : 0.0;
  PathPoint out;
  out.position = a.position + (b.position - a.position) * t;
  out.heading = lerp_angle(a.heading, b.heading, t);
  out.curvature = lerp(a.curvature, b.curvature, t);
  out.s = s;
  return out;
}

namespace {

// Tangential residual of the interpolated pose field at station l: zero when
// p lies on the normal through the interpolated reference point. Consistency
// with frenet_to_cartesian (which offsets along the interpolated normal)
// makes the projection/offset round trip exact up to the solver tolerance.
double tangential_residual(const ReferenceLine& line, const Point2& p, double l) {
  const PathPoint ref = interpolate_at(line, l);
  const Point2 tangent{std::cos(ref.heading), std::sin(ref.heading)};
  return (p - ref.position).dot(tangent);
}

FrenetState refine_projection(const ReferenceLine& line, const Point2& p,
                              double l_coarse) {
  const double total = line.total_length();
  const double step = std::max(line.spacing, total * 1e-6);

  // Bracket [lo, hi] with g(lo) >= 0 >= g(hi); g is positive while p is
  // still ahead of the station.
  double lo = std::max(0.0, l_coarse - step);
  double hi = std::min(total, l_coarse + step);
  double g_lo = tangential_residual(line, p, lo);
  double g_hi = tangential_residual(line, p, hi);
  for (int i = 0; i < 60 && g_lo < 0.0 && lo > 0.0; ++i) {
    lo = std::max(0.0, lo - step);
    g_lo = tangential_residual(line, p, lo);
  }
  for (int i = 0; i < 60 && g_hi > 0.0 && hi < total; ++i) {
    hi = std::min(total, hi + step);
    g_hi = tangential_residual(line, p, hi);
  }

  double l = l_coarse;
  if (g_lo < 0.0) {
    l = 0.0;  // before the path start
  } else if (g_hi > 0.0) {
    l = total;  // past the path end
  } else {
    for (int i = 0; i < 60; ++i) {
      l = 0.5 * (lo + hi);
      const double g = tangential_residual(line, p, l);
      if (g > 0.0)
        lo = l;
      else
        hi = l;
      if (hi - lo < 1e-12 * std::max(1.0, total)) break;
    }
    l = 0.5 * (lo + hi);
  }

  const PathPoint ref = interpolate_at(line, l);
  const Point2 normal{-std::sin(ref.heading), std::cos(ref.heading)};
  FrenetState f;
  f.l = l;
  f.d = (p - ref.position).dot(normal);
  return f;
}

}  // namespace

FrenetState project_to_frenet(const ReferenceLine& line, const Point2& p,
                              double horizon) {
  const auto& pts = line.points;
  if (pts.size() < 2) throw EmptyPath("project_to_frenet: reference line has < 2 points");

  double best_d2 = std::numeric_limits<double>::infinity();
  double best_l = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const Point2& a = pts[i].position;
    const Point2& b = pts[i + 1].position;
    const Point2 ab = b - a;
    const double len2 = ab.squaredNorm();
    double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Point2 foot = a + t * ab;
    const double d2 = (p - foot).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best_l = pts[i].s + t * (pts[i + 1].s - pts[i].s);
    }
  }
  if (std::sqrt(best_d2) > horizon)
    throw PointOutOfRange("project_to_frenet: point beyond projection horizon");

  return refine_projection(line, p, best_l);
}

PathPoint frenet_to_cartesian(const ReferenceLine& line, const FrenetState& f) {
  if (line.points.size() < 2) throw EmptyPath("frenet_to_cartesian: reference line has < 2 points");
  const double total = line.total_length();
  if (f.l < -1e-9 || f.l > total + 1e-9)
    throw StationOutOfRange("frenet_to_cartesian: station outside [0, total_length]");

  const PathPoint ref = interpolate_at(line, f.l);
  const double kr = ref.curvature;
  const double one_minus_kd = 1.0 - kr * f.d;
  if (one_minus_kd <= 0.0)
    throw CurvatureSingularity("frenet_to_cartesian: offset crosses center of curvature");

  // dkappa/ds of the reference, from the bracketing samples.
  double dkr = 0.0;
  {
    const int i = segment_index(line, std::clamp(f.l, 0.0, total));
    const PathPoint& a = line.points[i];
    const PathPoint& b = line.points[i + 1];
    if (b.s > a.s) dkr = (b.curvature - a.curvature) / (b.s - a.s);
  }

  const Point2 normal{-std::sin(ref.heading), std::cos(ref.heading)};

  PathPoint out;
  out.position = ref.position + f.d * normal;
  const double delta_theta = std::atan2(f.d_dot, one_minus_kd);
  out.heading = wrap_angle(ref.heading + delta_theta);
  const double cos_dt = std::cos(delta_theta);
  const double tan_dt = std::tan(delta_theta);
  const double kr_d_prime = dkr * f.d + kr * f.d_dot;
  out.curvature = (((f.d_ddot + kr_d_prime * tan_dt) * cos_dt * cos_dt) / one_minus_kd + kr) *
                  cos_dt / one_minus_kd;
  out.s = f.l;
  return out;
}

std::vector<double> numeric_curvature(const std::vector<Point2>& pts) {
  const int n = static_cast<int>(pts.size());
  if (n < 3) throw TooFewPoints("numeric_curvature: need >= 3 points");

  std::vector<double> kappa(n, 0.0);
  for (int i = 1; i + 1 < n; ++i) {
    const Point2 u = pts[i] - pts[i - 1];
    const Point2 v = pts[i + 1] - pts[i];
    const double lu = u.norm();
    const double lv = v.norm();
    const double lw = (pts[i + 1] - pts[i - 1]).norm();
    if (lu < 1e-12 || lv < 1e-12)
      throw DegenerateSpacing("numeric_curvature: duplicate consecutive points");
    if (lw < 1e-12) {
      kappa[i] = 0.0;  // folded back on itself; circumscribed circle undefined
      continue;
    }
    kappa[i] = 2.0 * cross2(u, v) / (lu * lv * lw);
  }
  kappa[0] = kappa[1];
  kappa[n - 1] = kappa[n - 2];
  return kappa;
}

}  // namespace planner
