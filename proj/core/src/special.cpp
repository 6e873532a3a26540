#include "nls/special.hpp"

#include <cmath>

namespace nls {

double bubble_center(int N, double eps) {
  return std::pow(N * (N - 2.0), 0.25 * (N - 2.0)) *
         std::pow(eps, -0.5 * (N - 2.0));
}

RadialFn bubble(double eps, GridPtr grid) {
  if (!(eps > 0.0)) fail(ErrorKind::InvalidArgument, "bubble needs eps > 0");
  const int N = grid->dim();
  const double cn = std::pow(N * (N - 2.0), 0.25 * (N - 2.0));
  const double p = 0.5 * (N - 2.0);
  auto u = [&](double r) { return cn * std::pow(eps / (eps * eps + r * r), p); };
  return RadialFn::sample(std::move(grid), u, bubble_center(N, eps));
}

double sobolev_constant(int N) {
  const ProblemParams p = ProblemParams::make(N, 2.0 + 2.0 / N, 1.0, 0.0);
  auto quotient = [&](double r_max) {
    auto g = make_graded_grid(p, 1e-2, r_max, 1600, 8000, 60000);
    const RadialFn u1 = bubble(1.0, g);
    const double grad = grad_norm_sq(u1);
    const double l2s = lp_norm(u1, p.two_star);
    return grad / (l2s * l2s);
  };
  // truncation error ~ c R^{2-N} + O(R^{-N}); two Richardson stages
  const double R = 1e3;
  const double s1 = quotient(R), s2 = quotient(2 * R), s3 = quotient(4 * R);
  const double w = std::pow(2.0, N - 2.0);
  const double e1 = (w * s2 - s1) / (w - 1.0);
  const double e2 = (w * s3 - s2) / (w - 1.0);
  const double w2 = std::pow(2.0, N);
  const double S = (w2 * e2 - e1) / (w2 - 1.0);
  if (!std::isfinite(S) || S <= 0.0)
    fail(ErrorKind::NumericFailure, "Sobolev constant extrapolation failed");
  return S;
}

std::vector<double> Soliton::eval(const std::vector<double>& radii) const {
  RadialField field{params, RadialOperator{-1.0, 1.0, 0.0}};
  return eval_matched(field, shot, radii);
}

Soliton soliton(const ProblemParams& params, double tol) {
  RadialField field{params, RadialOperator{-1.0, 1.0, 0.0}};
  const double r_end = 40.0;

  // bracket the separatrix over a coarse center scan
  const double b_lo_lim = 1.0 + 1e-4, b_hi_lim = 500.0;
  double b_prev = b_lo_lim;
  Outcome prev = classify_shot(field, b_prev, r_end).outcome;
  double lo = 0.0, hi = 0.0;
  for (int i = 1; i <= 64; ++i) {
    const double b = b_lo_lim * std::pow(b_hi_lim / b_lo_lim, i / 64.0);
    const Outcome cur = classify_shot(field, b, r_end).outcome;
    if (cur != prev && prev == Outcome::Floating && cur == Outcome::Crossing) {
      lo = b_prev;
      hi = b;
      break;
    }
    prev = cur;
    b_prev = b;
  }
  if (lo == 0.0)
    fail(ErrorKind::SearchFailure,
         "no floating-to-crossing transition for the soliton in [" +
             std::to_string(b_lo_lim) + ", " + std::to_string(b_hi_lim) + "]");

  MatchOptions opt;
  opt.rtol = std::min(tol, 1e-12);
  Soliton s;
  s.params = params;
  s.shot = match_separatrix(field, lo, hi, opt);
  s.center = s.shot.center;
  auto grid = make_graded_grid(params, 1e-2, r_end, 2000, 12000, 60000);
  s.profile = sample_matched(field, s.shot, grid, opt);
  s.mass_sq = lp_norm_pow(s.profile, 2.0);
  s.lq_q = lp_norm_pow(s.profile, params.q);
  s.grad_sq = grad_norm_sq(s.profile);
  return s;
}

double gn_quotient(const ProblemParams& params, const RadialFn& u) {
  const double nq = lp_norm(u, params.q);
  const double n2 = lp_norm(u, 2.0);
  const double g = std::sqrt(grad_norm_sq(u));
  return nq / (std::pow(n2, 1.0 - params.gamma_q) *
               std::pow(g, params.gamma_q));
}

double gn_constant(const ProblemParams& params, const Soliton& sol) {
  return std::pow(sol.lq_q, 1.0 / params.q) /
         (std::pow(sol.mass_sq, 0.5 * (1.0 - params.gamma_q)) *
          std::pow(sol.grad_sq, 0.5 * params.gamma_q));
}

double gn_sigma0(const ProblemParams& params) {
  return 4.0 / (params.N * (params.q - 2.0));
}

double gn_nu0(const ProblemParams& params) {
  return gn_sigma0(params) *
         (1.0 - (params.q - 2.0) * (params.N - 2.0) / 4.0);
}

RadialFn gn_rescale(const Soliton& sol, double nu, double sigma, GridPtr grid) {
  if (!(nu > 0.0 && sigma > 0.0))
    fail(ErrorKind::InvalidArgument, "gn_rescale needs nu, sigma > 0");
  const double rt = std::sqrt(nu);
  if (!grid)
    grid = make_graded_grid(sol.params, 1e-2 / rt, 40.0 / rt, 2000, 12000,
                            60000);
  const double amp = std::pow(nu / sigma, 1.0 / (sol.params.q - 2.0));
  std::vector<double> radii(grid->size());
  for (std::size_t i = 0; i < radii.size(); ++i)
    radii[i] = std::min(rt * grid->node(i), 40.0);
  auto w = sol.eval(radii);
  for (auto& v : w) v *= amp;
  return RadialFn(std::move(grid), std::move(w), amp * sol.center);
}

RadialFn gn_minimizer_phi0(const ProblemParams& params, const Soliton& sol,
                           GridPtr grid) {
  const double nu0 = gn_nu0(params), sigma0 = gn_sigma0(params);
  RadialFn phi0 = gn_rescale(sol, nu0, sigma0, std::move(grid));
  const double res =
      ode_residual(phi0, RadialOperator{-nu0, sigma0, 0.0}, params);
  const double scale = nu0 * std::max(1.0, phi0.center);
  if (res > 1e-3 * scale)
    fail(ErrorKind::CoefficientMismatch,
         "phi0 residual " + std::to_string(res) +
             " exceeds the O(h^2) budget; minimizer-equation coefficients "
             "inconsistent");
  return phi0;
}

double nu_a(double a, const RadialFn& phi0, const ProblemParams& params) {
  const double denom = 4.0 - params.N * (params.q - 2.0);
  if (std::abs(denom) < 1e-9)
    fail(ErrorKind::MassCriticalDegenerate,
         "mass of the minimizer family is scale-independent at q = 2 + 4/N");
  const double m = lp_norm_pow(phi0, 2.0);
  return std::pow(a * a / m, 2.0 * (params.q - 2.0) / denom);
}

RadialFn psi_mass_matched(const ProblemParams& params, const Soliton& sol,
                          double a, GridPtr grid) {
  const RadialFn phi0 = gn_minimizer_phi0(params, sol);
  const double na = nu_a(a, phi0, params);
  return gn_rescale(sol, na * gn_nu0(params), gn_sigma0(params),
                    std::move(grid));
}

double alpha_crit(const ProblemParams& params, double c_nq) {
  if (!params.is_mass_critical(1e-12))
    fail(ErrorKind::InvalidArgument,
         "alpha_crit is defined at q = 2 + 4/N only");
  const double form1 = std::pow(c_nq, -params.q) * (1.0 + 2.0 / params.N);
  const double form2 = 1.0 / (std::pow(c_nq, params.q) * params.gamma_q);
  if (std::abs(form1 - form2) > 1e-10 * form1)
    fail(ErrorKind::NumericFailure, "alpha_crit closed forms disagree");
  return 0.5 * (form1 + form2);
}

Constants compute_constants(const ProblemParams& params, const Soliton& sol) {
  Constants c;
  c.S = sobolev_constant(params.N);
  c.C_Nq = gn_constant(params, sol);
  c.sigma0 = gn_sigma0(params);
  c.nu0 = gn_nu0(params);
  c.soliton_center = sol.center;
  c.soliton_mass_sq = sol.mass_sq;
  c.soliton_lq_q = sol.lq_q;
  c.soliton_grad_sq = sol.grad_sq;
  const RadialFn phi0 = gn_minimizer_phi0(params, sol);
  c.phi0_mass_sq = lp_norm_pow(phi0, 2.0);
  if (params.is_mass_critical())
    c.alpha_crit = alpha_crit(params, c.C_Nq);
  else
    c.nu_a = nu_a(params.a, phi0, params);
  return c;
}

}  // namespace nls
