#include "nls/fibering.hpp"

#include <cmath>

namespace nls {

namespace {

// Ψ'(t)/t = grad_sq − μγ_q lq_q t^{qγ−2} − l2s t^{2*−2}; positive roots of
// Ψ' are the roots of this reduced form.
double psi_reduced(const FiberNorms& n, const ProblemParams& p, double t) {
  return n.grad_sq -
         p.mu * p.gamma_q * n.lq_q * std::pow(t, p.q * p.gamma_q - 2.0) -
         n.l2s * std::pow(t, p.two_star - 2.0);
}

double bisect_root(const FiberNorms& n, const ProblemParams& p, double lo,
                   double hi, bool rising) {
  for (int i = 0; i < 200; ++i) {
    const double m = std::sqrt(lo * hi);
    const double g = psi_reduced(n, p, m);
    if ((g < 0.0) == rising)
      lo = m;
    else
      hi = m;
    if (hi - lo <= 1e-14 * hi) break;
  }
  return std::sqrt(lo * hi);
}

}  // namespace

const char* to_string(PohozaevClass c) {
  switch (c) {
    case PohozaevClass::Plus: return "plus";
    case PohozaevClass::Zero: return "zero";
    case PohozaevClass::Minus: return "minus";
  }
  return "?";
}

FiberNorms FiberNorms::of(const RadialFn& u, const ProblemParams& params) {
  FiberNorms n;
  n.grad_sq = grad_norm_sq(u);
  n.lq_q = lp_norm_pow(u, params.q);
  n.l2s = lp_norm_pow(u, params.two_star);
  return n;
}

double energy(const FiberNorms& n, const ProblemParams& p) {
  return 0.5 * n.grad_sq - p.mu / p.q * n.lq_q - n.l2s / p.two_star;
}

double energy(const RadialFn& u, const ProblemParams& p) {
  return energy(FiberNorms::of(u, p), p);
}

double pohozaev(const FiberNorms& n, const ProblemParams& p) {
  return n.grad_sq - p.mu * p.gamma_q * n.lq_q - n.l2s;
}

double pohozaev(const RadialFn& u, const ProblemParams& p) {
  return pohozaev(FiberNorms::of(u, p), p);
}

double classify_value(const FiberNorms& n, const ProblemParams& p) {
  return 2.0 * n.grad_sq - p.mu * p.q * p.gamma_q * p.gamma_q * n.lq_q -
         p.two_star * n.l2s;
}

PohozaevClass classify(const FiberNorms& n, const ProblemParams& p) {
  const double v = classify_value(n, p);
  const double scale = 2.0 * n.grad_sq +
                       p.mu * p.q * p.gamma_q * p.gamma_q * n.lq_q +
                       p.two_star * n.l2s;
  if (std::abs(v) <= 1e-8 * scale) return PohozaevClass::Zero;
  return v > 0.0 ? PohozaevClass::Plus : PohozaevClass::Minus;
}

PohozaevClass classify(const RadialFn& u, const ProblemParams& p) {
  return classify(FiberNorms::of(u, p), p);
}

double psi_value(const FiberNorms& n, const ProblemParams& p, double t) {
  return 0.5 * t * t * n.grad_sq -
         p.mu / p.q * n.lq_q * std::pow(t, p.q * p.gamma_q) -
         n.l2s * std::pow(t, p.two_star) / p.two_star;
}

double psi_deriv(const FiberNorms& n, const ProblemParams& p, double t) {
  return t * n.grad_sq -
         p.mu * p.gamma_q * n.lq_q * std::pow(t, p.q * p.gamma_q - 1.0) -
         n.l2s * std::pow(t, p.two_star - 1.0);
}

double psi_second(const FiberNorms& n, const ProblemParams& p, double t) {
  const double qg = p.q * p.gamma_q;
  return n.grad_sq -
         p.mu * p.gamma_q * (qg - 1.0) * n.lq_q * std::pow(t, qg - 2.0) -
         (p.two_star - 1.0) * n.l2s * std::pow(t, p.two_star - 2.0);
}

FiberingProjection project(const FiberNorms& n, const ProblemParams& p) {
  FiberingProjection out;
  if (!(n.grad_sq > 0.0))
    fail(ErrorKind::InvalidArgument, "projection needs a nonzero profile");
  const double qg2 = p.q * p.gamma_q - 2.0;  // < 0 subcritical, 0 critical
  const double ts2 = p.two_star - 2.0;
  const bool no_q_term = p.mu * n.lq_q <= 0.0;

  if (n.l2s <= 0.0) {  // no critical content: a single pure-q root
    if (no_q_term) return out;
    const double t =
        std::pow(n.grad_sq / (p.mu * p.gamma_q * n.lq_q), 1.0 / qg2);
    if (qg2 < 0.0) {
      out.t_plus = t;
      out.psi_at_plus = psi_value(n, p, t);
    } else {
      out.t_minus = t;
      out.psi_at_minus = psi_value(n, p, t);
    }
    return out;
  }
  const double t_free = std::pow(n.grad_sq / n.l2s, 1.0 / ts2);
  if (no_q_term || std::abs(qg2) < 1e-14) {
    // reduced form g − c − l2s t^{2*-2}: at most one root, a Ψ-maximum
    const double c = no_q_term ? 0.0 : p.mu * p.gamma_q * n.lq_q;
    if (n.grad_sq <= c) return out;  // no roots: kinetic below the q-line
    const double t = std::pow((n.grad_sq - c) / n.l2s, 1.0 / ts2);
    out.t_minus = t;
    out.psi_at_minus = psi_value(n, p, t);
    return out;
  }

  if (qg2 > 0.0) {
    // supercritical: strictly decreasing reduced form, a single maximum root
    double hi = t_free;
    while (psi_reduced(n, p, hi) > 0.0) hi *= 2.0;
    const double t = bisect_root(n, p, 1e-8 * hi, hi, false);
    out.t_minus = t;
    out.psi_at_minus = psi_value(n, p, t);
    return out;
  }

  // subcritical: reduced form rises from −∞, peaks, falls to −∞
  const double t_peak =
      std::pow(p.mu * p.gamma_q * (-qg2) * n.lq_q / (ts2 * n.l2s),
               1.0 / (p.two_star - p.q * p.gamma_q));
  if (psi_reduced(n, p, t_peak) <= 0.0) return out;  // no positive roots
  double lo = t_peak;
  while (psi_reduced(n, p, lo) > 0.0) lo *= 0.5;
  out.t_plus = bisect_root(n, p, lo, t_peak, true);
  double hi = std::max(t_peak, 10.0 * t_free);
  while (psi_reduced(n, p, hi) > 0.0) hi *= 2.0;
  out.t_minus = bisect_root(n, p, t_peak, hi, false);
  out.psi_at_plus = psi_value(n, p, *out.t_plus);
  out.psi_at_minus = psi_value(n, p, *out.t_minus);
  return out;
}

FiberingProjection project(const RadialFn& u, const ProblemParams& p) {
  return project(FiberNorms::of(u, p), p);
}

double s_mu_solve(const RadialFn& psi_a, double mu_val,
                  const ProblemParams& params) {
  ProblemParams p = params;
  p.mu = mu_val;
  if (!(p.q_gamma_minus_2() < 0.0))
    fail(ErrorKind::InvalidArgument,
         "the P^+ scale exists below the mass-critical exponent only");
  const FiberNorms n = FiberNorms::of(psi_a, p);
  const FiberingProjection pr = project(n, p);
  if (!pr.t_plus)
    fail(ErrorKind::ThresholdExceeded,
         "no P^+ projection root: mu beyond the two-root regime");
  return *pr.t_plus;
}

double tau_of_mass(const RadialFn& u, double c, double b,
                   const ProblemParams& params) {
  if (!(b > 0.0 && c > 0.0))
    fail(ErrorKind::InvalidArgument, "tau_of_mass needs positive masses");
  FiberNorms n = FiberNorms::of(u, params);
  const PohozaevClass cls = classify(n, params);
  const double s = b / c;
  FiberNorms nb;
  nb.grad_sq = n.grad_sq * s * s;
  nb.lq_q = n.lq_q * std::pow(s, params.q);
  nb.l2s = n.l2s * std::pow(s, params.two_star);
  const FiberingProjection pr = project(nb, params);
  std::optional<double> t = (cls == PohozaevClass::Minus) ? pr.t_minus
                                                          : pr.t_plus;
  if (!t)
    fail(ErrorKind::ThresholdExceeded,
         "projection of the rescaled profile is empty on this branch");
  return *t;
}

double tau_prime(const RadialFn& u, double c, const ProblemParams& p) {
  const FiberNorms n = FiberNorms::of(u, p);
  const double qg = p.q * p.gamma_q;
  const double num = p.mu * qg * n.lq_q + p.two_star * n.l2s - 2.0 * n.grad_sq;
  const double den = classify_value(n, p);
  const double scale = 2.0 * n.grad_sq + p.mu * qg * p.gamma_q * n.lq_q +
                       p.two_star * n.l2s;
  if (std::abs(den) <= 1e-10 * scale)
    fail(ErrorKind::DegeneratePoint,
         "tau'(c) degenerates on the null part of the manifold");
  return num / (c * den);
}

}  // namespace nls
