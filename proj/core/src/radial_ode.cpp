#include "nls/radial_ode.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>

namespace nls {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;

double spow(double u, double p) {
  if (u <= 0.0) return 0.0;
  return std::pow(u, p);
}

struct Rhs {
  int N;
  double qm1, sm1;
  RadialOperator op;

  void operator()(const State& y, State& dy, double r) const {
    const double u = y[0];
    dy[0] = y[1];
    dy[1] = -(N - 1) / r * y[1] - op.lambda * u - op.c_q * spow(u, qm1) -
            op.c_crit * spow(u, sm1);
  }
};

Rhs make_rhs(const RadialField& f) {
  return Rhs{f.params.N, f.params.q - 1.0, f.params.two_star - 1.0, f.op};
}

double f_of(const RadialField& f, double b) {
  return f.op.lambda * b + f.op.c_q * spow(b, f.params.q - 1.0) +
         f.op.c_crit * spow(b, f.params.two_star - 1.0);
}

// series start u(r) = b - f(b) r^2 / (2N); h chosen well inside the local
// curvature scale
std::pair<double, State> series_start(const RadialField& f, double b,
                                      double r_end) {
  const double fb = f_of(f, b);
  double r_c = (fb != 0.0) ? std::sqrt(2.0 * f.params.N * b / std::abs(fb))
                           : r_end;
  const double h = std::min(1e-4 * r_c, 1e-4 * r_end);
  State y{b - fb * h * h / (2.0 * f.params.N), -fb * h / f.params.N};
  return {h, y};
}

using Dense = odeint::dense_output_runge_kutta<
    odeint::controlled_runge_kutta<odeint::runge_kutta_dopri5<State>>>;

Dense make_stepper(double rtol) {
  return odeint::make_dense_output(1e-300, rtol,
                                   odeint::runge_kutta_dopri5<State>());
}

// locate a sign change of pick(y) inside the current dense-output step
template <class Pick>
double locate(Dense& st, double r_lo, double r_hi, Pick pick) {
  State y;
  for (int i = 0; i < 80; ++i) {
    const double rm = 0.5 * (r_lo + r_hi);
    st.calc_state(rm, y);
    if (pick(y) <= 0.0)
      r_hi = rm;
    else
      r_lo = rm;
    if (r_hi - r_lo < 1e-12 * r_hi) break;
  }
  return 0.5 * (r_lo + r_hi);
}

struct ForwardResult {
  bool reached = false;    // got to r_target
  Outcome outcome = Outcome::Decaying;
  double r_stop = 0.0;
  double u = 0.0, du = 0.0;
  double u_before = 0.0;   // magnitude entering the terminating step
};

// integrate forward from the series start; stop at crossing/floating or at
// r_target. If `record` is given it is called at each requested radius
// (radii must be sorted ascending).
ForwardResult forward_shot(const RadialField& field, double b, double r_target,
                           double rtol,
                           const std::vector<double>* radii = nullptr,
                           std::vector<double>* out = nullptr) {
  auto rhs = make_rhs(field);
  auto [h, y0] = series_start(field, b, r_target);
  ForwardResult res;

  std::size_t ri = 0;
  auto record_until = [&](Dense& st, double r) {
    if (!radii) return;
    State y;
    while (ri < radii->size() && (*radii)[ri] <= r) {
      const double rq = (*radii)[ri];
      if (rq < h) {
        const double fb = f_of(field, b);
        (*out)[ri] = b - fb * rq * rq / (2.0 * field.params.N);
      } else {
        st.calc_state(rq, y);
        (*out)[ri] = y[0];
      }
      ++ri;
    }
  };

  if (y0[1] >= 0.0) {  // linear-dominated start: immediately non-decreasing
    res.outcome = Outcome::Floating;
    res.r_stop = h;
    res.u = y0[0];
    res.du = y0[1];
    return res;
  }

  Dense st = make_stepper(rtol);
  st.initialize(y0, h, 0.1 * h);
  double prev_r = h, prev_u = y0[0];
  while (st.current_time() < r_target) {
    if (st.current_time() + st.current_time_step() > r_target)
      st.initialize(st.current_state(), st.current_time(),
                    r_target - st.current_time());
    st.do_step(rhs);
    const double r = st.current_time();
    const State& y = st.current_state();
    if (st.current_time_step() < 1e-15 * r)
      fail(ErrorKind::NumericFailure, "step size underflow in radial shot");
    if (y[0] <= 0.0) {
      const double rc = locate(st, prev_r, r, [](const State& s) { return s[0]; });
      record_until(st, rc);
      res.outcome = Outcome::Crossing;
      res.r_stop = rc;
      res.u = 0.0;
      res.du = y[1];
      res.u_before = prev_u;
      return res;
    }
    if (y[1] >= 0.0) {
      const double rc =
          locate(st, prev_r, r, [](const State& s) { return -s[1]; });
      record_until(st, rc);
      res.outcome = Outcome::Floating;
      res.r_stop = rc;
      State ym;
      st.calc_state(rc, ym);
      res.u = ym[0];
      res.du = 0.0;
      res.u_before = prev_u;
      return res;
    }
    record_until(st, r);
    prev_r = r;
    prev_u = y[0];
  }
  State yt;
  st.calc_state(r_target, yt);
  record_until(st, r_target);
  res.reached = true;
  res.outcome = Outcome::Decaying;
  res.r_stop = r_target;
  res.u = yt[0];
  res.du = yt[1];
  return res;
}

// backward sweep from r_end on the linear decaying asymptote with amplitude
// `amp`; returns (u, du) at r_fit, optionally recording at sorted radii
// (descending visit order internally, output in ascending order).
std::pair<double, double> backward_sweep(const RadialField& field, double amp,
                                         double r_end, double r_fit,
                                         double rtol,
                                         const std::vector<double>* radii = nullptr,
                                         std::vector<double>* out = nullptr) {
  auto rhs = make_rhs(field);
  const double kappa = std::sqrt(-field.op.lambda);
  State y{amp, -amp * (kappa + (field.params.N - 1) / (2.0 * r_end))};
  Dense st = make_stepper(rtol);
  st.initialize(y, r_end, -0.01 / kappa);
  std::size_t ri = radii ? radii->size() : 0;
  while (st.current_time() > r_fit) {
    if (st.current_time() + st.current_time_step() < r_fit)
      st.initialize(st.current_state(), st.current_time(),
                    r_fit - st.current_time());
    st.do_step(rhs);
    if (radii) {
      State ys;
      while (ri > 0 && (*radii)[ri - 1] >= st.current_time() &&
             (*radii)[ri - 1] <= r_end) {
        st.calc_state((*radii)[ri - 1], ys);
        (*out)[ri - 1] = ys[0];
        --ri;
      }
    }
  }
  State yf;
  st.calc_state(r_fit, yf);
  return {yf[0], yf[1]};
}

// forward integration on a frozen logarithmic step ladder (classic RK4).
// The ladder is independent of the trial center, so the result is a smooth
// function of b: adaptive controllers quantize their step decisions in b and
// that roughness is what limits separatrix resolution.
ForwardResult forward_shot_fixed(const RadialField& field, double b,
                                 double h0, double r_target,
                                 int steps_per_efold) {
  auto rhs = make_rhs(field);
  const double fb = f_of(field, b);
  ForwardResult res;
  State y{b - fb * h0 * h0 / (2.0 * field.params.N), -fb * h0 / field.params.N};
  if (y[1] >= 0.0) {
    res.outcome = Outcome::Floating;
    res.r_stop = h0;
    res.u = y[0];
    res.du = y[1];
    return res;
  }
  const double ratio = std::exp(1.0 / steps_per_efold);
  double r = h0, prev_u = y[0];
  while (r < r_target) {
    const double r_next = std::min(r * ratio, r_target);
    const double h = r_next - r;
    State k1, k2, k3, k4, t;
    rhs(y, k1, r);
    for (int j = 0; j < 2; ++j) t[j] = y[j] + 0.5 * h * k1[j];
    rhs(t, k2, r + 0.5 * h);
    for (int j = 0; j < 2; ++j) t[j] = y[j] + 0.5 * h * k2[j];
    rhs(t, k3, r + 0.5 * h);
    for (int j = 0; j < 2; ++j) t[j] = y[j] + h * k3[j];
    rhs(t, k4, r + h);
    for (int j = 0; j < 2; ++j)
      y[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    r = r_next;
    if (y[0] <= 0.0) {
      res.outcome = Outcome::Crossing;
      res.r_stop = r;
      res.u = 0.0;
      res.du = y[1];
      res.u_before = prev_u;
      return res;
    }
    if (y[1] >= 0.0) {
      res.outcome = Outcome::Floating;
      res.r_stop = r;
      res.u = y[0];
      res.du = 0.0;
      res.u_before = prev_u;
      return res;
    }
    prev_u = y[0];
  }
  res.reached = true;
  res.outcome = Outcome::Decaying;
  res.r_stop = r_target;
  res.u = y[0];
  res.du = y[1];
  return res;
}

struct WrEval {
  double wr;       // normalized wronskian mismatch, + on the floating side
  double amp;      // matched tail amplitude
  bool early = false;
};

WrEval wronskian_at(const RadialField& field, double b, double r_fit,
                    double r_end, double rtol) {
  WrEval e{0.0, 0.0, false};
  const auto fwd = forward_shot(field, b, r_fit, rtol);
  if (!fwd.reached) {
    e.wr = fwd.outcome == Outcome::Crossing ? -1.0 : 1.0;
    e.early = true;
    return e;
  }
  // seed the tail amplitude from the linear transfer r^{(1-N)/2} e^{-kappa r},
  // then iterate so the backward sweep feels the nonlinearity at the true
  // physical amplitude (the q-term tail correction is slow for small q)
  const double kappa = std::sqrt(-field.op.lambda);
  double amp = fwd.u *
               std::pow(r_fit / r_end, 0.5 * (field.params.N - 1)) *
               std::exp(-kappa * (r_end - r_fit));
  double ub = 0, dub = 0;
  for (int it = 0; it < 12; ++it) {
    std::tie(ub, dub) = backward_sweep(field, amp, r_end, r_fit, rtol);
    if (!std::isfinite(ub) || ub <= 0.0)
      fail(ErrorKind::NumericFailure, "backward tail sweep left the branch");
    const double ratio = fwd.u / ub;
    amp *= ratio;
    if (std::abs(ratio - 1.0) < 1e-13) break;
  }
  e.amp = amp;
  e.wr = (fwd.du * ub - fwd.u * dub) /
         (std::abs(fwd.du * ub) + std::abs(fwd.u * dub));
  return e;
}

}  // namespace

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Crossing: return "crossing";
    case Outcome::Floating: return "floating";
    case Outcome::Decaying: return "decaying";
  }
  return "?";
}

ClassifyResult classify_shot(const RadialField& field, double b, double r_end,
                             double rtol) {
  const auto f = forward_shot(field, b, r_end, rtol);
  ClassifyResult c;
  c.r_stop = f.r_stop;
  c.u_end = f.u;
  c.du_end = f.du;
  if (!f.reached) {
    // an event fired at the numerical noise floor means the trajectory rode
    // the separatrix until integrator error took over
    c.outcome = (f.u_before < 1e-9 * b && f.r_stop > 0.5 * r_end)
                    ? Outcome::Decaying
                    : f.outcome;
    return c;
  }
  // reached r_end still positive and descending: decaying if the value is
  // already deep below the center scale, otherwise treat as floating
  c.outcome = (f.u < 1e-4 * b) ? Outcome::Decaying : Outcome::Floating;
  return c;
}

MatchedShot match_separatrix(const RadialField& field, double b_lo, double b_hi,
                             const MatchOptions& opt) {
  if (!(field.op.lambda < 0.0))
    fail(ErrorKind::InvalidArgument, "matching needs lambda < 0");
  const double kappa = std::sqrt(-field.op.lambda);
  const double r_end = opt.k_end / kappa;
  const double r_far = opt.k_fit / kappa;
  // The separatrix height is observable only from the far field (the
  // backward amplitude refit absorbs any interior perturbation), while the
  // forward solution of a concentrated profile is noisy out there: its error
  // grows algebraically across the peak's far field. So the height is
  // refined at r_far and the tail amplitude is fitted at the core scale.
  double r_near = r_far;
  if (field.op.c_crit > 0.0 && field.params.N > 2) {
    const double cn = std::pow(field.params.N * (field.params.N - 2.0),
                               0.25 * (field.params.N - 2.0)) *
                      std::pow(field.op.c_crit, -0.25 * (field.params.N - 2.0));
    const double eps_hat =
        std::pow(cn / (0.5 * (b_lo + b_hi)), 2.0 / (field.params.N - 2.0));
    r_near = std::min(r_far, std::max(opt.core_mult * eps_hat, 1e-9 / kappa));
  }

  auto wr_far = [&](double b) {
    return wronskian_at(field, b, r_far, r_end, opt.rtol);
  };

  // classification bisection first (cheap, geometric); a Decaying endpoint
  // means the bracket already sits on the separatrix within integrator
  // resolution and the wronskian stage takes over directly
  const Outcome lo_out = classify_shot(field, b_lo, r_end, opt.rtol).outcome;
  const Outcome hi_out = classify_shot(field, b_hi, r_end, opt.rtol).outcome;
  if (lo_out != hi_out && lo_out != Outcome::Decaying &&
      hi_out != Outcome::Decaying) {
    for (int i = 0; i < 40 && b_hi / b_lo > 1.0 + 1e-9; ++i) {
      const double bm = std::sqrt(b_lo * b_hi);
      const Outcome om = classify_shot(field, bm, r_end, opt.rtol).outcome;
      if (om == Outcome::Decaying) break;
      if (om == lo_out)
        b_lo = bm;
      else
        b_hi = bm;
    }
  }

  // far-field wronskian bracket: the classification midpoint carries noise
  // from events firing at the takeover radius, so widen well past it
  double w_lo_b = b_lo * (1.0 - 1e-5), w_hi_b = b_hi * (1.0 + 1e-5);
  WrEval w_lo = wr_far(w_lo_b), w_hi = wr_far(w_hi_b);
  for (int widen = 0; w_lo.wr * w_hi.wr > 0.0 && widen < 5; ++widen) {
    w_lo_b *= (1.0 - 1e-4 * std::pow(10.0, widen));
    w_hi_b *= (1.0 + 1e-4 * std::pow(10.0, widen));
    w_lo = wr_far(w_lo_b);
    w_hi = wr_far(w_hi_b);
  }

  MatchedShot shot;
  shot.r_fit = r_near;
  shot.r_end = r_end;

  if (w_lo.wr * w_hi.wr <= 0.0) {
    // sign bisection: robust against the far-field noise floor, and the
    // steep dichotomy slope there still pins the height to ~1e-12
    for (int it = 0; it < opt.max_secant + 20; ++it) {
      const double bm = 0.5 * (w_lo_b + w_hi_b);
      const WrEval wm = wr_far(bm);
      if (wm.wr * w_lo.wr > 0.0) {
        w_lo_b = bm;
        w_lo = wm;
      } else {
        w_hi_b = bm;
        w_hi = wm;
      }
      if (w_hi_b - w_lo_b < 1e-14 * w_hi_b) break;
    }
    shot.center = 0.5 * (w_lo_b + w_hi_b);
  } else {
    shot.center = 0.5 * (b_lo + b_hi);  // classification midpoint fallback
  }

  // amplitude fit at the clean interior radius
  const WrEval w_near =
      wronskian_at(field, shot.center, r_near, r_end, opt.rtol);
  shot.wronskian = w_near.wr;
  shot.tail_amp = w_near.amp;
  return shot;
}

RadialFn sample_matched(const RadialField& field, const MatchedShot& shot,
                        GridPtr grid, const MatchOptions& opt) {
  const auto v = eval_matched(field, shot, grid->nodes(), opt);
  return RadialFn(std::move(grid), v, shot.center);
}

std::vector<double> eval_matched(const RadialField& field,
                                 const MatchedShot& shot,
                                 const std::vector<double>& radii,
                                 const MatchOptions& opt) {
  const double kappa = std::sqrt(-field.op.lambda);
  const double r_fit = shot.r_fit > 0 ? shot.r_fit : opt.k_fit / kappa;
  const double r_end = shot.r_end > 0 ? shot.r_end : opt.k_end / kappa;
  std::vector<double> out(radii.size(), 0.0);

  std::vector<double> fwd_r, bk_r;
  for (double r : radii) (r <= r_fit ? fwd_r : bk_r).push_back(r);

  std::vector<double> fwd_v(fwd_r.size()), bk_v(bk_r.size(), 0.0);
  forward_shot(field, shot.center, r_fit, opt.rtol, &fwd_r, &fwd_v);
  if (!bk_r.empty()) {
    // clip requests beyond r_end: the tail there is below double noise anyway
    std::vector<double> in(bk_r.size());
    for (std::size_t i = 0; i < bk_r.size(); ++i)
      in[i] = std::min(bk_r[i], r_end);
    backward_sweep(field, shot.tail_amp, r_end, r_fit, opt.rtol, &in, &bk_v);
  }
  std::size_t i = 0;
  for (std::size_t k = 0; k < radii.size(); ++k)
    out[k] = (radii[k] <= r_fit) ? fwd_v[k] : bk_v[k - fwd_r.size()];
  (void)i;
  return out;
}


double wronskian_mismatch(const RadialField& field, double b, double r_fit,
                          double r_end, double rtol) {
  return wronskian_at(field, b, r_fit, r_end, rtol).wr;
}

}  // namespace nls
