#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "planner/geometry.hpp"

namespace planner {

// Monotone arc-length table for a parametric curve, built by adaptive chord
// subdivision: an interval is split until the two-chord sum agrees with the
// single chord within the (halved-per-level) tolerance. Supports station ->
// parameter inversion by linear interpolation.
class ArcLengthTable {
 public:
  ArcLengthTable(const std::function<Point2(double)>& eval,
                 const std::vector<double>& breakpoints, double tol = 1e-6)
      : eval_(eval) {
    ts_.push_back(breakpoints.front());
    ss_.push_back(0.0);
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
      const double t0 = breakpoints[i];
      const double t1 = breakpoints[i + 1];
      refine(t0, t1, eval_(t0), eval_(t1), tol, 0);
    }
  }

  double total() const { return ss_.back(); }

  // Parameter at arc-length station s (clamped to [0, total]).
  double parameter_at(double s) const {
    s = std::clamp(s, 0.0, total());
    auto it = std::upper_bound(ss_.begin(), ss_.end(), s);
    size_t i = static_cast<size_t>(it - ss_.begin());
    i = std::min(std::max<size_t>(i, 1), ss_.size() - 1);
    const double span = ss_[i] - ss_[i - 1];
    const double f = span > 0.0 ? (s - ss_[i - 1]) / span : 0.0;
    return ts_[i - 1] + f * (ts_[i] - ts_[i - 1]);
  }

 private:
  // The minimum depth guards against early acceptance on intervals whose
  // parameterization is non-uniform even though the geometry is flat.
  static constexpr int kMinDepth = 6;
  static constexpr int kMaxDepth = 30;

  void refine(double t0, double t1, const Point2& p0, const Point2& p1,
              double tol, int depth) {
    const double tm = 0.5 * (t0 + t1);
    const Point2 pm = eval_(tm);
    const double chord = (p1 - p0).norm();
    const double split = (pm - p0).norm() + (p1 - pm).norm();
    if (depth >= kMaxDepth || (depth >= kMinDepth && split - chord < tol)) {
      ts_.push_back(tm);
      ss_.push_back(ss_.back() + (pm - p0).norm());
      ts_.push_back(t1);
      ss_.push_back(ss_.back() + (p1 - pm).norm());
      return;
    }
    refine(t0, tm, p0, pm, 0.5 * tol, depth + 1);
    refine(tm, t1, pm, p1, 0.5 * tol, depth + 1);
  }

  std::function<Point2(double)> eval_;
  std::vector<double> ts_;
  std::vector<double> ss_;
};

}  // namespace planner
