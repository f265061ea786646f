#include "planner/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace planner {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ParseError("scenario: " + msg); }

void check_keys(const json& j, const std::string& section,
                const std::set<std::string>& allowed) {
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      fail("unknown key '" + item.key() + "' in section '" + section + "'");
}

double get_num(const json& j, const std::string& section, const std::string& key,
               double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) fail("'" + section + "." + key + "' must be a number");
  return j.at(key).get<double>();
}

bool get_bool(const json& j, const std::string& section, const std::string& key,
              bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) fail("'" + section + "." + key + "' must be a boolean");
  return j.at(key).get<bool>();
}

Point2 get_point(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail("'" + where + "' must be a [x, y] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

Eigen::Matrix3d get_diag3(const json& j, const std::string& where,
                          const Eigen::Matrix3d& fallback) {
  if (j.is_null()) return fallback;
  if (j.is_number()) return Eigen::Matrix3d::Identity() * j.get<double>();
  if (j.is_array() && j.size() == 3)
    return Eigen::Vector3d(j[0].get<double>(), j[1].get<double>(), j[2].get<double>())
        .asDiagonal();
  fail("'" + where + "' must be a scalar or a 3-element diagonal");
}

void parse_vehicle(const json& j, VehicleConfig& v) {
  check_keys(j, "vehicle",
             {"wheelbase", "width", "length", "x", "y", "heading", "v", "a"});
  v.wheelbase = get_num(j, "vehicle", "wheelbase", v.wheelbase);
  v.width = get_num(j, "vehicle", "width", v.width);
  v.length = get_num(j, "vehicle", "length", v.length);
  v.initial.x = get_num(j, "vehicle", "x", v.initial.x);
  v.initial.y = get_num(j, "vehicle", "y", v.initial.y);
  v.initial.heading = get_num(j, "vehicle", "heading", v.initial.heading);
  v.initial.v = get_num(j, "vehicle", "v", v.initial.v);
  v.initial.a = get_num(j, "vehicle", "a", v.initial.a);
}

void parse_planner(const json& j, PlannerSettings& p) {
  check_keys(j, "planner",
             {"grid", "weights", "sample_dl", "road_half_width", "horizon",
              "footprint"});
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    check_keys(g, "planner.grid",
               {"d_min", "d_max", "delta_d", "l_min", "l_max", "delta_l"});
    p.grid.d_min = get_num(g, "planner.grid", "d_min", p.grid.d_min);
    p.grid.d_max = get_num(g, "planner.grid", "d_max", p.grid.d_max);
    p.grid.delta_d = get_num(g, "planner.grid", "delta_d", p.grid.delta_d);
    p.grid.l_min = get_num(g, "planner.grid", "l_min", p.grid.l_min);
    p.grid.l_max = get_num(g, "planner.grid", "l_max", p.grid.l_max);
    p.grid.delta_l = get_num(g, "planner.grid", "delta_l", p.grid.delta_l);
  }
  if (j.contains("weights")) {
    const json& w = j.at("weights");
    check_keys(w, "planner.weights",
               {"w_s", "w_k", "w_kdot", "w_kddot", "w_kdddot", "w_dcenter",
                "w_alat", "w_alon", "w_alatdot", "w_alondot", "w_l", "w_t"});
    p.weights.w_s = get_num(w, "planner.weights", "w_s", p.weights.w_s);
    p.weights.w_k = get_num(w, "planner.weights", "w_k", p.weights.w_k);
    p.weights.w_kdot = get_num(w, "planner.weights", "w_kdot", p.weights.w_kdot);
    p.weights.w_kddot = get_num(w, "planner.weights", "w_kddot", p.weights.w_kddot);
    p.weights.w_kdddot = get_num(w, "planner.weights", "w_kdddot", p.weights.w_kdddot);
    p.weights.w_dcenter = get_num(w, "planner.weights", "w_dcenter", p.weights.w_dcenter);
    p.weights.w_alat = get_num(w, "planner.weights", "w_alat", p.weights.w_alat);
    p.weights.w_alon = get_num(w, "planner.weights", "w_alon", p.weights.w_alon);
    p.weights.w_alatdot = get_num(w, "planner.weights", "w_alatdot", p.weights.w_alatdot);
    p.weights.w_alondot = get_num(w, "planner.weights", "w_alondot", p.weights.w_alondot);
    p.weights.w_l = get_num(w, "planner.weights", "w_l", p.weights.w_l);
    p.weights.w_t = get_num(w, "planner.weights", "w_t", p.weights.w_t);
  }
  p.sample_dl = get_num(j, "planner", "sample_dl", p.sample_dl);
  p.road_half_width = get_num(j, "planner", "road_half_width", p.road_half_width);
  p.horizon = get_num(j, "planner", "horizon", p.horizon);
  if (j.contains("footprint")) {
    const json& f = j.at("footprint");
    check_keys(f, "planner.footprint", {"circles", "safety_margin"});
    p.footprint.safety_margin =
        get_num(f, "planner.footprint", "safety_margin", p.footprint.safety_margin);
    if (f.contains("circles")) {
      if (!f.at("circles").is_array()) fail("'planner.footprint.circles' must be an array");
      p.footprint.circles.clear();
      for (const json& c : f.at("circles")) {
        check_keys(c, "planner.footprint.circles[]", {"offset", "radius"});
        p.footprint.circles.push_back({get_num(c, "circle", "offset", 0.0),
                                       get_num(c, "circle", "radius", 1.0)});
      }
      p.footprint_from_vehicle = false;
    }
  }
}

void parse_acc(const json& j, AccSettings& a) {
  check_keys(j, "acc",
             {"tau_h", "d0", "T_L", "K_L", "T", "rho", "r", "u_max", "q_proc",
              "r_meas", "corridor", "detection_range"});
  a.params.tau_h = get_num(j, "acc", "tau_h", a.params.tau_h);
  a.params.d0 = get_num(j, "acc", "d0", a.params.d0);
  a.params.T_L = get_num(j, "acc", "T_L", a.params.T_L);
  a.params.K_L = get_num(j, "acc", "K_L", a.params.K_L);
  a.params.T = get_num(j, "acc", "T", a.params.T);
  if (j.contains("rho")) {
    const json& rho = j.at("rho");
    if (!rho.is_array() || rho.size() != 3) fail("'acc.rho' must have 3 entries");
    a.params.rho = {rho[0].get<double>(), rho[1].get<double>(), rho[2].get<double>()};
  }
  a.params.r = get_num(j, "acc", "r", a.params.r);
  a.params.u_max = get_num(j, "acc", "u_max", a.params.u_max);
  a.q_proc = get_diag3(j.value("q_proc", json()), "acc.q_proc", a.q_proc);
  a.r_meas = get_diag3(j.value("r_meas", json()), "acc.r_meas", a.r_meas);
  a.corridor = get_num(j, "acc", "corridor", a.corridor);
  a.detection_range = get_num(j, "acc", "detection_range", a.detection_range);
}

void parse_stanley(const json& j, StanleySettings& s) {
  check_keys(j, "stanley",
             {"mode", "delta_max", "Lx_low", "Lx_slope", "Lx_high", "v_break1",
              "v_break2", "ke_intercept", "ke_slope", "ke_high"});
  if (j.contains("mode")) {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "modified")
      s.mode = StanleyMode::kModified;
    else if (mode == "classic")
      s.mode = StanleyMode::kClassic;
    else
      fail("'stanley.mode' must be 'modified' or 'classic'");
  }
  s.schedule.delta_max = get_num(j, "stanley", "delta_max", s.schedule.delta_max);
  s.schedule.Lx_low = get_num(j, "stanley", "Lx_low", s.schedule.Lx_low);
  s.schedule.Lx_slope = get_num(j, "stanley", "Lx_slope", s.schedule.Lx_slope);
  s.schedule.Lx_high = get_num(j, "stanley", "Lx_high", s.schedule.Lx_high);
  s.schedule.v_break1 = get_num(j, "stanley", "v_break1", s.schedule.v_break1);
  s.schedule.v_break2 = get_num(j, "stanley", "v_break2", s.schedule.v_break2);
  s.schedule.ke_intercept = get_num(j, "stanley", "ke_intercept", s.schedule.ke_intercept);
  s.schedule.ke_slope = get_num(j, "stanley", "ke_slope", s.schedule.ke_slope);
  s.schedule.ke_high = get_num(j, "stanley", "ke_high", s.schedule.ke_high);
}

void parse_sim(const json& j, SimSettings& s) {
  check_keys(j, "sim",
             {"dt", "replan_period", "duration", "cruise_speed", "resample_step",
              "measurement_noise"});
  s.dt = get_num(j, "sim", "dt", s.dt);
  s.replan_period = get_num(j, "sim", "replan_period", s.replan_period);
  s.duration = get_num(j, "sim", "duration", s.duration);
  s.cruise_speed = get_num(j, "sim", "cruise_speed", s.cruise_speed);
  s.resample_step = get_num(j, "sim", "resample_step", s.resample_step);
  s.measurement_noise = get_bool(j, "sim", "measurement_noise", s.measurement_noise);
}

}  // namespace

Obstacle make_box_obstacle(const Point2& center, double length, double width,
                           double heading, double point_spacing,
                           const Eigen::Vector2d& velocity) {
  Obstacle obstacle;
  obstacle.velocity = velocity;
  const Point2 axis{std::cos(heading), std::sin(heading)};
  const Point2 normal{-axis.y(), axis.x()};
  const Point2 corners[4] = {
      center + 0.5 * length * axis + 0.5 * width * normal,
      center - 0.5 * length * axis + 0.5 * width * normal,
      center - 0.5 * length * axis - 0.5 * width * normal,
      center + 0.5 * length * axis - 0.5 * width * normal,
  };
  for (int e = 0; e < 4; ++e) {
    const Point2& a = corners[e];
    const Point2& b = corners[(e + 1) % 4];
    const double len = (b - a).norm();
    const int n = std::max(1, static_cast<int>(std::ceil(len / point_spacing)));
    for (int i = 0; i < n; ++i) obstacle.points.push_back(a + (b - a) * (double(i) / n));
  }
  return obstacle;
}

void Scenario::validate() const {
  if (waypoints.size() < 3) fail("need at least 3 waypoints");
  if (!(sim.dt > 0.0 && sim.dt <= 0.1)) fail("'sim.dt' must be in (0, 0.1]");
  if (sim.replan_period < sim.dt - 1e-12) fail("'sim.replan_period' must be >= dt");
  if (sim.duration <= 0.0) fail("'sim.duration' must be positive");
  if (sim.cruise_speed <= 0.0) fail("'sim.cruise_speed' must be positive");
  if (sim.resample_step <= 0.0) fail("'sim.resample_step' must be positive");
  if (std::max(std::abs(planner.grid.d_min), std::abs(planner.grid.d_max)) >
      planner.road_half_width + 1e-9)
    fail("planner grid offsets exceed road_half_width");
  acc.params.validate();
  FootprintCircles fp = planner.footprint;
  if (planner.footprint_from_vehicle)
    fp = FootprintCircles::cover_box(vehicle.length, vehicle.width, fp.safety_margin);
  validate_covers_box(fp, vehicle.length, vehicle.width);
}

Scenario parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // Recover line/column from the byte offset for the error message.
    size_t line = 1, col = 1;
    for (size_t i = 0; i < std::min(text.size(), static_cast<size_t>(e.byte)); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream msg;
    msg << "scenario: malformed JSON at line " << line << ", column " << col;
    throw ParseError(msg.str());
  }

  check_keys(root, "(top level)",
             {"version", "waypoints", "corners", "obstacles", "vehicle", "planner",
              "acc", "stanley", "sim", "rng_seed"});
  if (!root.contains("version")) fail("missing required 'version' field");
  Scenario sc;
  sc.version = root.at("version").get<int>();
  if (sc.version != 1) fail("unsupported scenario version");

  if (root.contains("waypoints"))
    for (const json& w : root.at("waypoints"))
      sc.waypoints.push_back(get_point(w, "waypoints[]"));

  if (root.contains("corners"))
    for (const json& c : root.at("corners")) {
      check_keys(c, "corners[]", {"w1", "w2", "w3", "d"});
      CornerSpec spec;
      spec.w1 = get_point(c.at("w1"), "corners[].w1");
      spec.w2 = get_point(c.at("w2"), "corners[].w2");
      spec.w3 = get_point(c.at("w3"), "corners[].w3");
      if (c.contains("d")) {
        const json& d = c.at("d");
        if (!d.is_array() || d.size() != 3) fail("'corners[].d' must have 3 entries");
        spec.d1 = d[0].get<double>();
        spec.d2 = d[1].get<double>();
        spec.d3 = d[2].get<double>();
      }
      sc.corners.push_back(spec);
    }

  if (root.contains("obstacles"))
    for (const json& o : root.at("obstacles")) {
      check_keys(o, "obstacles[]", {"points", "box", "velocity"});
      Eigen::Vector2d vel{0.0, 0.0};
      if (o.contains("velocity")) {
        const Point2 v = get_point(o.at("velocity"), "obstacles[].velocity");
        vel = {v.x(), v.y()};
      }
      if (o.contains("box")) {
        const json& b = o.at("box");
        check_keys(b, "obstacles[].box",
                   {"center", "length", "width", "heading", "point_spacing"});
        sc.obstacles.push_back(make_box_obstacle(
            get_point(b.at("center"), "obstacles[].box.center"),
            get_num(b, "obstacles[].box", "length", 4.0),
            get_num(b, "obstacles[].box", "width", 1.8),
            get_num(b, "obstacles[].box", "heading", 0.0),
            get_num(b, "obstacles[].box", "point_spacing", 0.25), vel));
      } else if (o.contains("points")) {
        Obstacle obstacle;
        obstacle.velocity = vel;
        for (const json& p : o.at("points"))
          obstacle.points.push_back(get_point(p, "obstacles[].points[]"));
        sc.obstacles.push_back(obstacle);
      } else {
        fail("obstacle needs either 'points' or 'box'");
      }
    }

  if (root.contains("vehicle")) parse_vehicle(root.at("vehicle"), sc.vehicle);
  if (root.contains("planner")) parse_planner(root.at("planner"), sc.planner);
  if (root.contains("acc")) parse_acc(root.at("acc"), sc.acc);
  if (root.contains("stanley")) parse_stanley(root.at("stanley"), sc.stanley);
  if (root.contains("sim")) parse_sim(root.at("sim"), sc.sim);
  if (root.contains("rng_seed")) sc.rng_seed = root.at("rng_seed").get<std::uint64_t>();

  if (sc.planner.footprint_from_vehicle)
    sc.planner.footprint = FootprintCircles::cover_box(
        sc.vehicle.length, sc.vehicle.width, sc.planner.footprint.safety_margin);

  sc.validate();
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

}  // namespace planner
