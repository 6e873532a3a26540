#pragma once

#include <optional>
#include <vector>

#include "nls/fibering.hpp"
#include "nls/radial_ode.hpp"

namespace nls {

/// Outcome of a single forward shot of the radial problem at (lambda, center).
struct ShotResult {
  Outcome outcome = Outcome::Floating;
  double r_stop = 0.0;                // crossing / turning radius
  std::optional<RadialFn> profile;    // present when Decaying
};

ShotResult shoot(double lambda, double center, const ProblemParams& params,
                 GridPtr grid);

/// Window of center heights scanned for separatrices.
struct ScanWindow {
  double b_lo = 0.0;  // 0 = automatic, from the problem scales
  double b_hi = 0.0;
  std::size_t points = 0;  // 0 = automatic (~16 per decade)
};

/// All crossing/floating transitions at fixed lambda, bisected to 1e-12
/// relative width; increasing center order (index = branch_id).
std::vector<double> find_branches(double lambda, const ProblemParams& params,
                                  const ScanWindow& window = {});

/// A certified normalized solution.
struct SolutionBranch {
  double lambda = 0.0;
  double center = 0.0;  // u(0)
  RadialFn profile;
  double mass_sq = 0.0;
  double energy = 0.0;
  double pohozaev_res = 0.0;  // |P(u)| / ‖∇u‖₂²
  PohozaevClass p_class = PohozaevClass::Zero;
  int branch_id = 0;
  FiberNorms norms;
  double lagrange_res = 0.0;  // |λ‖u‖₂² − μ(γ_q−1)‖u‖_q^q| / |λ|‖u‖₂²
  double wronskian = 0.0;
  MatchedShot shot;  // re-evaluate the solution at arbitrary radii

  std::vector<double> eval(const std::vector<double>& radii,
                           const ProblemParams& params) const;
};

/// ‖u‖₂² of the decaying profile on one branch at fixed lambda.
double mass_of(double lambda, int branch_id, const ProblemParams& params);

struct SolveOptions {
  double mass_rtol = 1e-8;
  double lambda_lo = 0.0;  // 0 = automatic window from the mu-scaling laws
  double lambda_hi = 0.0;
  int window_points = 17;
  int max_widen = 2;
};

/// Bisect lambda on a branch until the profile mass hits a²; throws
/// NoSolutionOnBranch when the branch never reaches the target (the expected
/// outcome in the nonexistence regime).
SolutionBranch solve_mass(double a, double mu, int branch_id,
                          const ProblemParams& params,
                          const SolveOptions& opt = {});

/// Minimal-energy certified branch at (a, mu); NoSolutionOnBranch if none.
SolutionBranch ground_state(double a, double mu, const ProblemParams& params,
                            const SolveOptions& opt = {});

struct CertReport {
  double ode_res = 0.0;
  double pohozaev_res = 0.0;
  double lagrange_res = 0.0;
  double decay_rate_ratio = 0.0;  // fitted tail rate over sqrt(-lambda)
  bool monotone = false;
  double decay_bound_C = 0.0;  // sup u (1+r²)^{(N-2)/2}
};

CertReport verify_solution(const SolutionBranch& sol,
                           const ProblemParams& params);

/// Build the full certified branch data at a known (lambda, branch) point.
SolutionBranch branch_at(double lambda, int branch_id,
                         const ProblemParams& params);

}  // namespace nls
