#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "nls/solver.hpp"
#include "nls/special.hpp"

namespace nls {

using Json = nlohmann::ordered_json;

/// Per-mu observables of one computed solution.
struct SweepRecord {
  double mu = 0.0;
  double lambda = 0.0;
  double grad_sq = 0.0;
  double lq_q = 0.0;
  double l2star = 0.0;  // ‖u‖_{2*}^{2*}
  double energy = 0.0;
  double center = 0.0;
  std::optional<double> s_mu;        // P^+ fibering scale, subcritical
  std::optional<double> eps_mu;      // peak-matched concentration scale
  std::optional<double> profile_err; // filled by the rescaled-profile checks
  int branch_id = 0;
  PohozaevClass p_class = PohozaevClass::Zero;
  SolutionBranch solution;
};

/// log-log least-squares line with the predicted exponent alongside.
struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double predicted_slope = 0.0;
  double rel_slope_err = 0.0;
  std::size_t n = 0;
};

/// Least squares on raw (x, y) pairs.
ScalingFit fit_linear(const std::vector<double>& xs,
                      const std::vector<double>& ys, double predicted = 0.0);

/// Least squares on (log x, log y); xs, ys must be positive, >= 5 points.
ScalingFit fit_power(const std::vector<double>& xs,
                     const std::vector<double>& ys, double predicted = 0.0);

enum class BranchKind { Plus, Minus };

/// Solve across a mu grid and collect observables; failures become absences.
/// Points run in parallel (capped by NLS_THREADS).
std::vector<SweepRecord> sweep(const ProblemParams& params,
                               const std::vector<double>& mu_grid,
                               BranchKind kind);

struct CheckReport {
  std::string check;
  bool pass = false;
  Json details;
};

/// Slopes of −λ and ‖∇u‖₂² against μ on the P^+ branch; the predicted
/// exponent 2/(2−qγ_q) is recomputed from the problem data.
struct Lemma21Result {
  ScalingFit lambda_fit;
  ScalingFit grad_fit;
  CheckReport report;
};
Lemma21Result check_lemma21(const std::vector<SweepRecord>& records,
                            const ProblemParams& params);

/// H¹ errors of the s_mu-rescaled P^+ profiles against the mass-a² minimizer.
struct Prop21Result {
  std::vector<double> errors;
  double prefactor = 0.0;       // s_mu μ^{-1/(2-qγ_q)} at the smallest mu
  double prefactor_ref = 0.0;   // σ₀^{-1/(2-qγ_q)}
  CheckReport report;
};
Prop21Result check_prop21_profile(std::vector<SweepRecord>& records,
                                  const ProblemParams& params,
                                  const Soliton& sol);

/// Small-mu limit of the peaked branch: gradient/critical norms against
/// S^{N/2} and profile distances to the matching bubble.
CheckReport check_bubble_limit(std::vector<SweepRecord>& records,
                               const ProblemParams& params, double S);

/// Concentration-rate fit of the peaked branch for N = 3, 4.
struct Rate431Result {
  ScalingFit fit;
  CheckReport report;
};
Rate431Result check_431(std::vector<SweepRecord>& records,
                        const ProblemParams& params);

/// Large-mu scaling of the supercritical branch: gradient-norm law with
/// prefactor, λ prefactor, and the rescaled-profile limit.
CheckReport check_theorem13(std::vector<SweepRecord>& records,
                            const ProblemParams& params, const Soliton& sol,
                            double c_nq);

/// Sandwich bound and rescaled-profile report as mu approaches the
/// mass-critical existence threshold.
CheckReport check_theorem13_critical(const ProblemParams& params,
                                     const std::vector<double>& mu_grid,
                                     const Soliton& sol, double S);

/// Cutoff-bubble norm orders in eps.
struct TestFnResult {
  std::vector<ScalingFit> fits;
  std::vector<std::string> labels;
  CheckReport report;
};
TestFnResult testfn_orders(const std::vector<double>& eps_grid,
                           const ProblemParams& params);

/// Peak-energy bound of the superposed path against m^+ + S^{N/2}/N, with
/// the cross-term order and the peaked-branch consistency bound.
CheckReport energy_gap_check(double a, double mu, const ProblemParams& params,
                             double eps = 1e-3, double S = 0.0);

/// Mass-critical threshold behavior: monotone m^- below, vanishing family
/// energies above, and the empirical existence frontier.
CheckReport critical_mass_sweep(double a, const ProblemParams& params,
                                const Soliton& sol, double frontier_rel_tol = 0.05);

/// Peak-matched concentration scale: eps with bubble_center(N, eps) = u(0).
double eps_from_center(const ProblemParams& params, double center);

}  // namespace nls
