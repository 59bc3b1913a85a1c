#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace forge::cli {

/// Parsed command-line configuration; one command per invocation.
struct RunConfig {
  std::string command;
  std::string spec_path;
  std::string plan_path;
  std::string out_path;
  std::string spec_out_path;
  std::string format;  // json unless stated; table defaults to csv
  std::string big_n_range;
  int n = 2;
  int m = 0;  // 0: not set
  int big_n = 0;
  std::uint64_t seed = 1;
  int budget = 10000;
  double tol = 1e-8;
  int trials = 50;
  int samples = 10000;
  int grid_res = 2000;
  int starts = 64;
  int pool_bound = 25;
  bool sign_pool = false;
  bool exhaustive = false;
};

/// Exit codes: 0 success, 1 input error, 2 verification failure.
int run(const std::vector<std::string>& args);

int dispatch(const RunConfig& config);

}  // namespace forge::cli
