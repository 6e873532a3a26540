#pragma once

#include <string>
#include <vector>

#include "nls/params.hpp"

namespace nls::cli {

/// Parsed and validated invocation.
struct RunConfig {
  std::string mode;  // subcommand
  int N = 3;
  double q = 2.5;
  double a = 1.0;
  double mu = 1e-4;
  // grid policy overrides (0 = per-problem defaults)
  double r_max = 0.0;
  std::size_t n_nodes = 0;
  double stretch = 0.0;
  // mode-specific knobs
  std::string branch = "ground";  // solve
  std::string check;              // sweep
  double mu_min = 1e-6, mu_max = 1e-3;
  int points = 7;
  double eps = 1e-3;
  double eps_min = 1e-4, eps_max = 1e-1;
  std::string profile_csv;  // project input
  std::string output_dir = ".";
  unsigned seed = 0;

  ProblemParams params() const { return ProblemParams::make(N, q, a, mu); }
};

/// Parse argv (and an optional --config file; command line wins). Throws
/// Error{InvalidArgument} with the offending key on bad input.
RunConfig parse_config(const std::vector<std::string>& args);

/// Execute; returns the process exit status:
/// 0 = pass, 1 = a requested check failed, 2 = solver/usage error.
int run(const RunConfig& config);

/// Frontend entry: parse + run with the structured-error contract.
int main(int argc, char** argv);

}  // namespace nls::cli
