#pragma once

#include <string>
#include <vector>

#include "nls/asymptotics.hpp"

namespace nls {

/// %.17g rendering used by every CSV cell.
std::string fmt17(double x);

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRecord>& records,
                     const ProblemParams& params);

/// Two-column (x, y) plot data for a fitted relation.
void write_xy_csv(const std::string& path, const std::string& xlabel,
                  const std::string& ylabel, const std::vector<double>& xs,
                  const std::vector<double>& ys);

void write_json_file(const std::string& path, const Json& j);

/// Verdict document {check, predicted, measured, tolerance, pass, details}.
Json verdict_json(const CheckReport& rep);

Json constants_json(const ProblemParams& params, const Constants& c);

Json branch_json(const SolutionBranch& s, const ProblemParams& params);

Json error_json(const Error& e);

}  // namespace nls
