#include "planner/lateral_planner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace planner {

QuinticPolynomial solve_quintic(const FrenetState& c0, const FrenetState& ce) {
  const double L = ce.l - c0.l;
  if (L <= 1e-6) throw ZeroLength("solve_quintic: end station must exceed start station");

  QuinticPolynomial poly;
  poly.l0 = c0.l;
  poly.le = ce.l;
  poly.alpha[0] = c0.d;
  poly.alpha[1] = c0.d_dot;
  poly.alpha[2] = 0.5 * c0.d_ddot;

  // Boundary defects at the end station, after the start-state extrapolation.
  const double A = ce.d - (c0.d + c0.d_dot * L + 0.5 * c0.d_ddot * L * L);
  const double B = ce.d_dot - (c0.d_dot + c0.d_ddot * L);
  const double C = ce.d_ddot - c0.d_ddot;

  const double L2 = L * L;
  const double L3 = L2 * L;
  const double L4 = L3 * L;
  const double L5 = L4 * L;
  poly.alpha[3] = 10.0 * A / L3 - 4.0 * B / L2 + 0.5 * C / L;
  poly.alpha[4] = -15.0 * A / L4 + 7.0 * B / L3 - C / L2;
  poly.alpha[5] = 6.0 * A / L5 - 3.0 * B / L4 + 0.5 * C / L3;
  return poly;
}

namespace {

int axis_count(double lo, double hi, double step) {
  return static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

}  // namespace

std::vector<FrenetState> sample_end_states(const SamplingGrid& grid) {
  if (grid.delta_d <= 0.0 || grid.delta_l <= 0.0 || grid.d_min > grid.d_max ||
      grid.l_min > grid.l_max)
    throw EmptyGrid("sample_end_states: invalid grid bounds");

  const int nd = axis_count(grid.d_min, grid.d_max, grid.delta_d);
  const int nl = axis_count(grid.l_min, grid.l_max, grid.delta_l);
  std::vector<FrenetState> ends;
  ends.reserve(static_cast<size_t>(nd) * nl);
  for (int j = 0; j < nl; ++j)
    for (int i = 0; i < nd; ++i)
      ends.push_back({grid.l_min + j * grid.delta_l, grid.d_min + i * grid.delta_d,
                      0.0, 0.0});
  return ends;
}

bool ObstacleSet::empty() const {
  for (const Obstacle& o : obstacles_)
    if (!o.points.empty()) return false;
  return true;
}

void ObstacleSet::begin_cycle() const {
  cycle_open_ = true;
  slices_.clear();
}

const KdTree& ObstacleSet::slice(double t) const {
  if (!cycle_open_) throw IndexNotBuilt("ObstacleSet: begin_cycle() not called");
  auto it = slices_.find(t);
  if (it == slices_.end()) {
    std::vector<Point2> pts;
    for (const Obstacle& o : obstacles_)
      for (const Point2& p : o.points) pts.push_back(p + t * o.velocity);
    it = slices_.emplace(t, KdTree(pts)).first;
  }
  return it->second;
}

double ObstacleSet::nearest_distance_brute(const Point2& q, double t) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Obstacle& o : obstacles_)
    for (const Point2& p : o.points)
      best = std::min(best, (q - (p + t * o.velocity)).norm());
  return best;
}

FootprintCircles FootprintCircles::cover_box(double length, double width,
                                             double safety_margin) {
  FootprintCircles fp;
  fp.safety_margin = safety_margin;
  const double spacing = length / 3.0;
  const double radius =
      std::max(width / 2.0 + 0.1,
               std::hypot(length / 6.0, width / 2.0) + 1e-9);
  fp.circles = {{-spacing, radius}, {0.0, radius}, {spacing, radius}};
  validate_covers_box(fp, length, width);
  return fp;
}

void validate_covers_box(const FootprintCircles& fp, double length, double width) {
  const double xs[2] = {-length / 2.0, length / 2.0};
  const double ys[2] = {-width / 2.0, width / 2.0};
  for (double x : xs)
    for (double y : ys) {
      bool covered = false;
      for (const auto& c : fp.circles)
        if (std::hypot(x - c.offset, y) <= c.radius + 1e-12) covered = true;
      if (!covered)
        throw Error("FootprintCircles: circle union does not cover the vehicle box");
    }
}

CollisionResult check_collision(const CandidateTrajectory& traj,
                                const ObstacleSet& obstacles,
                                const FootprintCircles& footprint,
                                double horizon) {
  CollisionResult res;
  if (obstacles.empty()) return res;

  for (const TrajectorySample& sample : traj.samples) {
    if (sample.t > horizon) break;
    const KdTree& tree = obstacles.slice(sample.t);
    if (tree.empty()) continue;
    const Point2 dir{std::cos(sample.point.heading), std::sin(sample.point.heading)};
    for (const auto& circle : footprint.circles) {
      const Point2 center = sample.point.position + circle.offset * dir;
      const double dist = tree.nearest(center).distance;
      res.min_clearance = std::min(res.min_clearance, dist - circle.radius);
      if (dist < circle.radius + footprint.safety_margin) {
        res.feasible = false;
        return res;
      }
    }
  }
  return res;
}

CandidateTrajectory build_candidate(const ReferenceLine& reference,
                                    const FrenetState& c0, double d_e,
                                    double length, double speed,
                                    double sample_dl) {
  if (speed <= 0.0) throw NonpositiveSpeed("build_candidate: speed must be positive");
  if (sample_dl <= 0.0) throw Error("build_candidate: sample_dl must be positive");

  const double usable = reference.total_length() - c0.l - 1e-9;
  const double eff_length = std::min(length, usable);
  if (eff_length <= std::max(1e-6, std::min(sample_dl, length) * 0.5))
    throw ZeroLength("build_candidate: candidate does not fit on the reference line");

  CandidateTrajectory traj;
  traj.d_e = d_e;
  traj.l_e = eff_length;
  FrenetState ce{c0.l + eff_length, d_e, 0.0, 0.0};
  traj.poly = solve_quintic(c0, ce);

  std::vector<double> stations;
  for (double l = c0.l; l < ce.l - 1e-9; l += sample_dl) stations.push_back(l);
  stations.push_back(ce.l);

  traj.samples.resize(stations.size());
  for (size_t i = 0; i < stations.size(); ++i) {
    const double l = stations[i];
    TrajectorySample& s = traj.samples[i];
    s.l = l;
    s.d = traj.poly.value(l);
    const FrenetState f{l, s.d, traj.poly.deriv1(l), traj.poly.deriv2(l)};
    s.point = frenet_to_cartesian(reference, f);
    s.a_lat = speed * speed * s.point.curvature;
    s.a_lon = 0.0;
    if (i > 0) {
      const TrajectorySample& prev = traj.samples[i - 1];
      s.section_len = (s.point.position - prev.point.position).norm();
      s.section_time = s.section_len / speed;
      s.t = prev.t + s.section_time;
      if (s.section_time > 0.0) {
        s.a_lat_rate = (s.a_lat - prev.a_lat) / s.section_time;
        s.a_lon_rate = (s.a_lon - prev.a_lon) / s.section_time;
      }
    }
  }
  return traj;
}

double evaluate_cost(const CandidateTrajectory& traj, const CostWeights& weights,
                     const CandidateTrajectory* previous) {
  const auto& samples = traj.samples;
  const int m = static_cast<int>(samples.size());
  if (m < 2) throw TooFewSamples("evaluate_cost: need >= 2 samples");

  double s_term = 0.0, t_term = 0.0, k_term = 0.0, d_term = 0.0;
  double alat_term = 0.0, alon_term = 0.0, alat_rate_term = 0.0, alon_rate_term = 0.0;
  for (int i = 0; i < m; ++i) {
    const TrajectorySample& s = samples[i];
    if (i > 0) {
      if (s.section_time <= 0.0)
        throw NonpositiveSpeed("evaluate_cost: nonpositive section time");
      s_term += s.section_len * s.section_len;
      t_term += s.section_time * s.section_time;
      alat_rate_term += s.a_lat_rate * s.a_lat_rate;
      alon_rate_term += s.a_lon_rate * s.a_lon_rate;
    }
    k_term += s.point.curvature * s.point.curvature;
    d_term += s.d * s.d;
    alat_term += s.a_lat * s.a_lat;
    alon_term += s.a_lon * s.a_lon;
  }

  // Curvature derivatives by arc-length finite differences.
  std::vector<double> k1(std::max(m - 1, 0));
  double k1_term = 0.0, k2_term = 0.0, k3_term = 0.0;
  for (int i = 0; i + 1 < m; ++i) {
    const double ds = std::max(samples[i + 1].section_len, 1e-9);
    k1[i] = (samples[i + 1].point.curvature - samples[i].point.curvature) / ds;
    k1_term += k1[i] * k1[i];
  }
  std::vector<double> k2(std::max(m - 2, 0));
  for (int i = 0; i + 2 < m; ++i) {
    const double ds = std::max(samples[i + 1].section_len, 1e-9);
    k2[i] = (k1[i + 1] - k1[i]) / ds;
    k2_term += k2[i] * k2[i];
  }
  for (int i = 0; i + 3 < m; ++i) {
    const double ds = std::max(samples[i + 1].section_len, 1e-9);
    const double k3 = (k2[i + 1] - k2[i]) / ds;
    k3_term += k3 * k3;
  }

  // Consistency with the previous plan: match each sample to the previous
  // trajectory's sample with the nearest station.
  double l_term = 0.0;
  if (previous != nullptr && !previous->samples.empty()) {
    const auto& prev = previous->samples;
    for (const TrajectorySample& s : samples) {
      auto it = std::lower_bound(prev.begin(), prev.end(), s.l,
                                 [](const TrajectorySample& a, double l) {
                                   return a.l < l;
                                 });
      double best = std::numeric_limits<double>::infinity();
      double d_prev = 0.0;
      if (it != prev.end() && std::abs(it->l - s.l) < best) {
        best = std::abs(it->l - s.l);
        d_prev = it->d;
      }
      if (it != prev.begin()) {
        const auto& before = *(it - 1);
        if (std::abs(before.l - s.l) < best) {
          best = std::abs(before.l - s.l);
          d_prev = before.d;
        }
      }
      if (std::isfinite(best)) {
        const double diff = s.d - d_prev;
        l_term += diff * diff;
      }
    }
  }

  return weights.w_s * s_term + weights.w_k * k_term + weights.w_kdot * k1_term +
         weights.w_kddot * k2_term + weights.w_kdddot * k3_term +
         weights.w_dcenter * d_term + weights.w_alat * alat_term +
         weights.w_alon * alon_term + weights.w_alatdot * alat_rate_term +
         weights.w_alondot * alon_rate_term + weights.w_l * l_term +
         weights.w_t * t_term;
}

CandidateTrajectory plan(const PlanInput& input, PlanDiagnostics* diag) {
  if (input.reference == nullptr || input.obstacles == nullptr)
    throw Error("plan: reference line and obstacle set are required");

  const std::vector<FrenetState> ends = sample_end_states(input.grid);
  input.obstacles->begin_cycle();

  std::vector<CandidateTrajectory> candidates;
  candidates.reserve(ends.size());
  for (size_t k = 0; k < ends.size(); ++k) {
    CandidateTrajectory cand;
    try {
      cand = build_candidate(*input.reference, input.c0, ends[k].d, ends[k].l,
                             input.speed, input.sample_dl);
    } catch (const ZeroLength&) {
      continue;  // does not fit on the remaining reference line
    }
    cand.grid_index = static_cast<int>(k);
    cand.cost = evaluate_cost(cand, input.weights, input.previous);
    candidates.push_back(std::move(cand));
  }

  std::vector<int> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (candidates[a].cost != candidates[b].cost)
      return candidates[a].cost < candidates[b].cost;
    return candidates[a].grid_index < candidates[b].grid_index;
  });

  int checked = 0;
  int selected = -1;
  for (int idx : order) {
    CandidateTrajectory& cand = candidates[idx];
    const CollisionResult res =
        check_collision(cand, *input.obstacles, input.footprint, input.horizon);
    ++checked;
    cand.collision_checked = true;
    cand.feasible = res.feasible;
    cand.min_clearance = res.min_clearance;
    if (res.feasible) {
      selected = idx;
      break;
    }
  }

  if (diag != nullptr) {
    diag->candidate_count = static_cast<int>(candidates.size());
    diag->checked_count = checked;
    diag->selected_grid_index = selected >= 0 ? candidates[selected].grid_index : -1;
    diag->candidates.clear();
    diag->candidates.reserve(candidates.size());
    for (const CandidateTrajectory& cand : candidates)
      diag->candidates.push_back({cand.grid_index, cand.l_e, cand.d_e, cand.cost,
                                  cand.collision_checked, cand.feasible,
                                  selected >= 0 && cand.grid_index ==
                                      candidates[selected].grid_index});
  }

  if (selected < 0)
    throw NoFeasibleTrajectory("plan: every candidate collides");
  return candidates[selected];
}

}  // namespace planner
