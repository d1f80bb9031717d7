#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace systolic {

/// Parsed command line.  run() executes it and returns the process exit code:
/// 0 success / all checks pass, 1 a theorem check failed, 2 bad input.
struct RunConfig {
  std::string subcommand;  // body | lattice | flat | periodic | reduce | verify | render

  std::string input_path;
  std::string op;

  // lattice
  std::string basis;  // "u1,u2;v1,v2"

  // flat family sweeps
  std::string family;
  double eps = 0.25;
  std::string sweep;  // "start:end:count"

  // periodic solver parameters
  std::string z = "1,0";
  double h = 1.0 / 64;
  int stencil = 4;
  int quad_n = 64;
  int directions = 16;

  // reduce
  std::string mode = "abt";  // mahler | abt
  std::string trace_path;

  // verify
  std::string suite = "all";
  std::string report_path;

  // render
  long bound = 50;

  // global outputs and knobs
  std::string csv_path;
  std::string json_path;
  std::string svg_path;
  std::uint64_t seed = 42;
  int threads = 0;  // <= 0 picks a hardware default
  double tol_override = -1.0;  // < 0 keeps the per-check propagated tolerances
};

int run(const RunConfig& config);

}  // namespace systolic
