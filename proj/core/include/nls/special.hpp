#pragma once

#include <optional>

#include "nls/radial_fn.hpp"
#include "nls/radial_ode.hpp"

namespace nls {

/// Height of the standard bubble at the origin: U_eps(0) = c_N eps^{-(N-2)/2}.
double bubble_center(int N, double eps);

/// The explicit extremal U_eps(r) = [N(N-2)]^{(N-2)/4} (eps/(eps^2+r^2))^{(N-2)/2}
/// of the critical Sobolev embedding, sampled on `grid`.
RadialFn bubble(double eps, GridPtr grid);

/// Best constant S in ‖u‖_{2*}^2 <= S^{-1} ‖∇u‖_2^2, from quadrature of U_1
/// with Richardson extrapolation in the truncation radius. Deterministic for
/// fixed N; cached by the caller (see Constants).
double sobolev_constant(int N);

/// Unique positive decaying solution of -Δw + w = w^{q-1}, found by shooting
/// on the separatrix between crossing and floating trajectories.
struct Soliton {
  ProblemParams params;
  double center = 0.0;   // w(0)
  RadialFn profile;
  double mass_sq = 0.0;  // ‖w‖₂²
  double lq_q = 0.0;     // ‖w‖_q^q
  double grad_sq = 0.0;  // ‖∇w‖₂²
  MatchedShot shot;      // evaluate w at arbitrary radii via eval()

  std::vector<double> eval(const std::vector<double>& radii) const;
};

Soliton soliton(const ProblemParams& params, double tol = 1e-12);

/// Best Gagliardo-Nirenberg constant ‖u‖_q <= C ‖u‖₂^{1-γ_q} ‖∇u‖₂^{γ_q},
/// attained at the soliton (and any of its rescalings).
double gn_constant(const ProblemParams& params, const Soliton& sol);

/// The GN quotient ‖u‖_q / (‖u‖₂^{1-γ_q} ‖∇u‖₂^{γ_q}) of an arbitrary profile.
double gn_quotient(const ProblemParams& params, const RadialFn& u);

/// Normalization coefficients of the GN minimizer equation
/// -Δφ₀ + ν₀ φ₀ = σ₀ φ₀^{q-1}.
double gn_sigma0(const ProblemParams& params);
double gn_nu0(const ProblemParams& params);

/// The member of the minimizer family solving -Δψ + ν ψ = σ ψ^{q-1}:
/// ψ(r) = (ν/σ)^{1/(q-2)} w(√ν r). Sampled exactly through the soliton's
/// matched shot; default grid spans 40/√ν.
RadialFn gn_rescale(const Soliton& sol, double nu, double sigma,
                    GridPtr grid = nullptr);

/// φ₀ itself: gn_rescale at (ν₀, σ₀), residual-checked.
RadialFn gn_minimizer_phi0(const ProblemParams& params, const Soliton& sol,
                           GridPtr grid = nullptr);

/// Mass-matching exponent ν_a = (a²/‖φ₀‖₂²)^{2(q-2)/(4-N(q-2))}; rejects the
/// mass-critical exponent where the family's mass is ν-independent.
double nu_a(double a, const RadialFn& phi0, const ProblemParams& params);

/// The minimizer rescaling with mass exactly a² (q != 2+4/N): PDE
/// coefficients (ν_a ν₀, σ₀).
RadialFn psi_mass_matched(const ProblemParams& params, const Soliton& sol,
                          double a, GridPtr grid = nullptr);

/// Existence threshold at the mass-critical exponent, both closed forms:
/// C^{-q}(1+2/N) and 1/(C^q γ_q).
double alpha_crit(const ProblemParams& params, double c_nq);

/// Named constants of a parameter point, computed once and reused.
struct Constants {
  double S = 0.0;
  double C_Nq = 0.0;
  double nu0 = 0.0;
  double sigma0 = 0.0;
  std::optional<double> alpha_crit;  // only at q = 2+4/N
  double nu_a = 0.0;                 // only at q != 2+4/N
  double soliton_center = 0.0;
  double soliton_mass_sq = 0.0;
  double soliton_lq_q = 0.0;
  double soliton_grad_sq = 0.0;
  double phi0_mass_sq = 0.0;
};

Constants compute_constants(const ProblemParams& params, const Soliton& sol);

}  // namespace nls
