#pragma once

#include <string>

#include "planner/scenario.hpp"

namespace planner {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;       // IO or internal error
inline constexpr int kExitParseError = 2;    // scenario problems
inline constexpr int kExitNoTrajectory = 3;  // planner found no feasible candidate

// smooth: reference_line.csv (s,x,y,heading,curvature), continuity.csv and,
// when corners are declared, corners.csv with the six control points each.
void cmd_smooth(const Scenario& scenario, const std::string& out_dir);

// plan: one planning cycle from the vehicle's initial state; candidates.csv
// with one row per grid candidate. Rethrows NoFeasibleTrajectory after the
// CSV is written.
void cmd_plan(const Scenario& scenario, const std::string& out_dir);

// simulate: trace.csv, replans.csv and metrics.txt for the closed-loop run.
void cmd_simulate(const Scenario& scenario, const std::string& out_dir);

// Flag parsing (--scenario, --out, --seed, --stage) and error-to-exit-code
// mapping for the planner binary.
int run_cli(int argc, char** argv);

}  // namespace planner
