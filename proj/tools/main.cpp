#include "planner/cli.hpp"

int main(int argc, char** argv) { return planner::run_cli(argc, argv); }
