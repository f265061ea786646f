#include "planner/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "planner/csv.hpp"
#include "planner/sim.hpp"

namespace planner {

namespace {

namespace fs = std::filesystem;

void ensure_dir(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir);
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

// c0 for a one-shot planning cycle, from the vehicle's initial pose.
FrenetState initial_frenet_state(const Scenario& scenario, const ReferenceLine& ref) {
  const Point2 rear{scenario.vehicle.initial.x, scenario.vehicle.initial.y};
  FrenetState f = project_to_frenet(ref, rear);
  const PathPoint at = interpolate_at(ref, f.l);
  const double dtheta = wrap_angle(scenario.vehicle.initial.heading - at.heading);
  f.d_dot = (1.0 - at.curvature * f.d) * std::tan(dtheta);
  return f;
}

}  // namespace

void cmd_smooth(const Scenario& scenario, const std::string& out_dir) {
  ensure_dir(out_dir);
  const ReferenceLine ref = build_reference(scenario);

  CsvWriter line_csv(join(out_dir, "reference_line.csv"),
                     {"s", "x", "y", "heading", "curvature"});
  for (const PathPoint& p : ref.points)
    line_csv.row({p.s, p.position.x(), p.position.y(), p.heading, p.curvature});

  const ContinuityReport rep = continuity_report(ref);
  std::ofstream cont(join(out_dir, "continuity.csv"));
  if (!cont) throw IoError("cannot open continuity.csv");
  cont << "metric,value\n";
  cont << "heading_jump," << format_g9(rep.heading_jump) << '\n';
  cont << "second_derivative_jump," << format_g9(rep.second_derivative_jump) << '\n';
  cont << "curvature_jump," << format_g9(rep.curvature_jump) << '\n';
  cont << "heading_rate," << format_g9(rep.heading_rate) << '\n';
  cont << "second_derivative_rate," << format_g9(rep.second_derivative_rate) << '\n';
  cont << "curvature_rate," << format_g9(rep.curvature_rate) << '\n';

  if (!scenario.corners.empty()) {
    CsvWriter corners_csv(join(out_dir, "corners.csv"),
                          {"corner", "point", "x", "y"});
    for (size_t c = 0; c < scenario.corners.size(); ++c) {
      const QuinticBezier b = control_points(scenario.corners[c]);
      for (int i = 0; i < 6; ++i)
        corners_csv.row({static_cast<double>(c), static_cast<double>(i),
                         b.control_points[i].x(), b.control_points[i].y()});
    }
  }
}

void cmd_plan(const Scenario& scenario, const std::string& out_dir) {
  ensure_dir(out_dir);
  const ReferenceLine ref = build_reference(scenario);

  PlanInput input;
  input.c0 = initial_frenet_state(scenario, ref);
  input.grid = scenario.planner.grid;
  input.weights = scenario.planner.weights;
  input.reference = &ref;
  const ObstacleSet obstacles(scenario.obstacles);
  input.obstacles = &obstacles;
  input.footprint = scenario.planner.footprint;
  input.speed = std::max(scenario.vehicle.initial.v, 1.0);
  input.sample_dl = scenario.planner.sample_dl;
  input.horizon = scenario.planner.horizon;

  PlanDiagnostics diag;
  std::exception_ptr no_trajectory;
  try {
    plan(input, &diag);
  } catch (const NoFeasibleTrajectory&) {
    no_trajectory = std::current_exception();
  }

  CsvWriter csv(join(out_dir, "candidates.csv"),
                {"grid_index", "l_e", "d_e", "cost", "checked", "feasible",
                 "selected"});
  for (const CandidateSummary& c : diag.candidates)
    csv.row({static_cast<double>(c.grid_index), c.l_e, c.d_e, c.cost,
             c.checked ? 1.0 : 0.0, c.feasible ? 1.0 : 0.0,
             c.selected ? 1.0 : 0.0});

  if (no_trajectory) std::rethrow_exception(no_trajectory);
}

void cmd_simulate(const Scenario& scenario, const std::string& out_dir) {
  ensure_dir(out_dir);
  const Trace trace = run(scenario);

  CsvWriter trace_csv(join(out_dir, "trace.csv"),
                      {"time", "x", "y", "heading", "v", "a", "delta", "u",
                       "e_fa", "theta_e", "d_error", "clearance", "candidate",
                       "emergency"});
  for (const TraceRow& r : trace.rows)
    trace_csv.row({r.time, r.state.x, r.state.y, r.state.heading, r.state.v,
                   r.state.a, r.delta, r.u, r.e_fa, r.theta_e, r.d_error,
                   r.clearance, static_cast<double>(r.candidate_id),
                   r.emergency ? 1.0 : 0.0});

  CsvWriter replan_csv(join(out_dir, "replans.csv"),
                       {"index", "time", "candidates", "checked", "selected",
                        "cost", "d_e", "l_e", "predicted_clearance", "success"});
  for (const ReplanRow& r : trace.replans)
    replan_csv.row({static_cast<double>(r.index), r.time,
                    static_cast<double>(r.candidate_count),
                    static_cast<double>(r.checked_count),
                    static_cast<double>(r.selected_grid_index), r.selected_cost,
                    r.selected_d_e, r.selected_l_e, r.predicted_clearance,
                    r.success ? 1.0 : 0.0});

  const Metrics m = metrics(trace);
  std::ofstream out(join(out_dir, "metrics.txt"));
  if (!out) throw IoError("cannot open metrics.txt");
  out << "max_cross_track=" << format_g9(m.max_cross_track) << '\n'
      << "rms_cross_track=" << format_g9(m.rms_cross_track) << '\n'
      << "max_lateral_accel=" << format_g9(m.max_lateral_accel) << '\n'
      << "max_jerk=" << format_g9(m.max_jerk) << '\n'
      << "min_clearance=" << format_g9(m.min_clearance) << '\n'
      << "mean_abs_distance_error=" << format_g9(m.mean_abs_distance_error) << '\n'
      << "replan_count=" << m.replan_count << '\n'
      << "mean_checked=" << format_g9(m.mean_checked) << '\n';
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Reference-line smoothing, lateral planning and closed-loop simulation"};
  std::string scenario_path;
  std::string out_dir;
  std::string stage;
  std::int64_t seed = -1;
  app.add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  app.add_option("--out", out_dir, "Output directory")->required();
  app.add_option("--stage", stage, "Pipeline stage: smooth | plan | simulate")
      ->required()
      ->check(CLI::IsMember({"smooth", "plan", "simulate"}));
  app.add_option("--seed", seed, "Override the scenario rng_seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    Scenario scenario = load_scenario(scenario_path);
    if (seed >= 0) scenario.rng_seed = static_cast<std::uint64_t>(seed);
    if (stage == "smooth")
      cmd_smooth(scenario, out_dir);
    else if (stage == "plan")
      cmd_plan(scenario, out_dir);
    else
      cmd_simulate(scenario, out_dir);
    return kExitOk;
  } catch (const NoFeasibleTrajectory& e) {
    std::cerr << "no feasible trajectory: " << e.what() << '\n';
    return kExitNoTrajectory;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParseError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace planner
