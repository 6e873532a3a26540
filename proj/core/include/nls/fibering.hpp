#pragma once

#include <optional>

#include "nls/radial_fn.hpp"

namespace nls {

enum class PohozaevClass { Plus, Zero, Minus };

const char* to_string(PohozaevClass c);

/// The three norms the fibering map depends on.
struct FiberNorms {
  double grad_sq = 0.0;  // ‖∇u‖₂²
  double lq_q = 0.0;     // ‖u‖_q^q
  double l2s = 0.0;      // ‖u‖_{2*}^{2*}

  static FiberNorms of(const RadialFn& u, const ProblemParams& params);
};

/// E_mu(u) = ½‖∇u‖₂² − (μ/q)‖u‖_q^q − (1/2*)‖u‖_{2*}^{2*}.
double energy(const RadialFn& u, const ProblemParams& params);
double energy(const FiberNorms& n, const ProblemParams& params);

/// Pohozaev value ‖∇u‖₂² − μγ_q‖u‖_q^q − ‖u‖_{2*}^{2*}; zero on the manifold.
double pohozaev(const RadialFn& u, const ProblemParams& params);
double pohozaev(const FiberNorms& n, const ProblemParams& params);

/// Sign of 2‖∇u‖₂² − μqγ_q²‖u‖_q^q − 2*‖u‖_{2*}^{2*} with a relative
/// tolerance band (1e-8) mapped to Zero.
PohozaevClass classify(const RadialFn& u, const ProblemParams& params);
PohozaevClass classify(const FiberNorms& n, const ProblemParams& params);
double classify_value(const FiberNorms& n, const ProblemParams& params);

/// Fibering map Ψ_u(t) = E_mu(u_t) and its first two t-derivatives.
double psi_value(const FiberNorms& n, const ProblemParams& params, double t);
double psi_deriv(const FiberNorms& n, const ProblemParams& params, double t);
double psi_second(const FiberNorms& n, const ProblemParams& params, double t);

/// Projection roots of Ψ'_u: t_plus is a local minimum of Ψ (maps into P^+),
/// t_minus a local maximum (P^-).
struct FiberingProjection {
  std::optional<double> t_plus;
  std::optional<double> t_minus;
  std::optional<double> psi_at_plus;
  std::optional<double> psi_at_minus;

  bool empty() const { return !t_plus && !t_minus; }
};

FiberingProjection project(const RadialFn& u, const ProblemParams& params);
FiberingProjection project(const FiberNorms& n, const ProblemParams& params);

/// The scale s_mu placing the mass-a² minimizer onto P^+ (smaller root of
/// the fibering derivative), with the second-order inequality verified.
double s_mu_solve(const RadialFn& psi_a, double mu, const ProblemParams& params);

/// Mass-continuation projection parameter: v_b = (b/c)u re-projected onto the
/// same manifold part as u; tau(c) = 1.
double tau_of_mass(const RadialFn& u, double c, double b,
                   const ProblemParams& params);

/// Closed-form derivative tau'(c) of the mass-continuation parameter.
double tau_prime(const RadialFn& u, double c, const ProblemParams& params);

}  // namespace nls
