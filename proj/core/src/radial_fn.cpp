#include "nls/radial_fn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace nls {

namespace {

double spow(double u, double p) {
  if (u == 0.0) return 0.0;
  return u > 0 ? std::pow(u, p) : -std::pow(-u, p);
}

void require_same_grid(const RadialFn& f, const RadialFn& g) {
  if (f.grid == g.grid) return;
  if (f.grid && g.grid && f.grid->size() == g.grid->size() &&
      f.grid->nodes() == g.grid->nodes())
    return;
  fail(ErrorKind::InvalidArgument, "radial functions live on different grids");
}

// Quadratic-fit first/second derivative through (x0,y0),(x1,y1),(x2,y2),
// evaluated at x1.
struct Stencil3 {
  double d1, d2;
};
Stencil3 stencil3(double x0, double y0, double x1, double y1, double x2,
                  double y2) {
  const double hl = x1 - x0, hr = x2 - x1;
  const double denom = hl * hr * (hl + hr);
  Stencil3 s;
  s.d1 = (y2 * hl * hl - y0 * hr * hr + y1 * (hr * hr - hl * hl)) / denom;
  s.d2 = 2.0 * (y0 * hr - y1 * (hl + hr) + y2 * hl) / denom;
  return s;
}

}  // namespace

RadialFn::RadialFn(GridPtr g, std::vector<double> v, double c)
    : grid(std::move(g)), values(std::move(v)), center(c) {
  if (!grid || values.size() != grid->size())
    fail(ErrorKind::InvalidArgument, "value count does not match grid size");
}

RadialFn RadialFn::sample(GridPtr g, const std::function<double(double)>& u) {
  return sample(g, u, u(0.5 * g->node(0)));
}

RadialFn RadialFn::sample(GridPtr g, const std::function<double(double)>& u,
                          double center) {
  std::vector<double> v(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) v[i] = u(g->node(i));
  return RadialFn(std::move(g), std::move(v), center);
}

RadialFn operator-(const RadialFn& f, const RadialFn& g) {
  require_same_grid(f, g);
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.values[i] - g.values[i];
  return RadialFn(f.grid, std::move(v), f.center - g.center);
}

RadialFn operator+(const RadialFn& f, const RadialFn& g) {
  return axpy(f, 1.0, g);
}

RadialFn scaled(const RadialFn& f, double c) {
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c * f.values[i];
  return RadialFn(f.grid, std::move(v), c * f.center);
}

RadialFn axpy(const RadialFn& f, double t, const RadialFn& g) {
  require_same_grid(f, g);
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = f.values[i] + t * g.values[i];
  return RadialFn(f.grid, std::move(v), f.center + t * g.center);
}

double lp_norm_pow(const RadialFn& f, double p) {
  if (!(p >= 1.0)) fail(ErrorKind::InvalidArgument, "lp_norm needs p >= 1");
  const auto& w = f.grid->weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    acc += w[i] * std::pow(std::abs(f.values[i]), p);
  return f.grid->sphere_area() * acc;
}

double lp_norm(const RadialFn& f, double p) {
  return std::pow(lp_norm_pow(f, p), 1.0 / p);
}

std::vector<double> derivative(const RadialFn& f) {
  const auto& r = f.grid->nodes();
  const std::size_t n = r.size();
  std::vector<double> d(n);
  // center acts as the r = 0 sample; radial symmetry pins u'(0) = 0
  d[0] = stencil3(0.0, f.center, r[0], f.values[0], r[1], f.values[1]).d1;
  for (std::size_t i = 1; i + 1 < n; ++i)
    d[i] = stencil3(r[i - 1], f.values[i - 1], r[i], f.values[i], r[i + 1],
                    f.values[i + 1])
               .d1;
  // one-sided at the outer end (quadratic through the last three nodes)
  if (n >= 3) {
    const double h1 = r[n - 2] - r[n - 3], h2 = r[n - 1] - r[n - 2];
    const double y0 = f.values[n - 3], y1 = f.values[n - 2],
                 y2 = f.values[n - 1];
    d[n - 1] = y0 * h2 / (h1 * (h1 + h2)) - y1 * (h1 + h2) / (h1 * h2) +
               y2 * (h1 + 2.0 * h2) / (h2 * (h1 + h2));
  }
  return d;
}

double grad_norm_sq(const RadialFn& f) {
  const auto d = derivative(f);
  const auto& w = f.grid->weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) acc += w[i] * d[i] * d[i];
  return f.grid->sphere_area() * acc;
}

double h1_dist(const RadialFn& f, const RadialFn& g) {
  require_same_grid(f, g);
  const RadialFn diff = f - g;
  const double l2 = lp_norm(diff, 2.0);
  return std::sqrt(grad_norm_sq(diff) + l2 * l2);
}

double ode_residual(const RadialFn& f, const RadialOperator& op,
                    const ProblemParams& params) {
  const auto& r = f.grid->nodes();
  const std::size_t n = r.size();
  const double qm1 = params.q - 1.0, sm1 = params.two_star - 1.0;
  double worst = 0.0;
  // augmented stencil: (0, center) serves as the left neighbour of node 0
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double xl = (i == 0) ? 0.0 : r[i - 1];
    const double yl = (i == 0) ? f.center : f.values[i - 1];
    const double x = r[i], xr = r[i + 1];
    // guard against catastrophic cancellation on pathologically fine spacing
    if (x - xl < 1e3 * std::numeric_limits<double>::epsilon() * x) continue;
    const auto s = stencil3(xl, yl, x, f.values[i], xr, f.values[i + 1]);
    const double u = f.values[i];
    const double lhs = -s.d2 - (params.N - 1) / x * s.d1 - op.lambda * u -
                       op.c_q * spow(u, qm1) - op.c_crit * spow(u, sm1);
    const double scale = 1.0 + std::abs(spow(u, sm1));
    worst = std::max(worst, std::abs(lhs) / scale);
  }
  return worst;
}

double ode_residual(const RadialFn& f, double lambda,
                    const ProblemParams& params) {
  return ode_residual(f, RadialOperator{lambda, params.mu, 1.0}, params);
}

// ---------------------------------------------------------------------------
// monotone cubic (Fritsch–Carlson) interpolation with decay-model tails
// ---------------------------------------------------------------------------

namespace {

struct Pchip {
  std::vector<double> x, y, d;

  static Pchip build(const RadialFn& u) {
    Pchip p;
    const auto& r = u.grid->nodes();
    const std::size_t n = r.size() + 1;
    p.x.resize(n);
    p.y.resize(n);
    p.x[0] = 0.0;
    p.y[0] = u.center;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      p.x[i + 1] = r[i];
      p.y[i + 1] = u.values[i];
    }
    p.d.assign(n, 0.0);
    std::vector<double> h(n - 1), del(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = p.x[i + 1] - p.x[i];
      del[i] = (p.y[i + 1] - p.y[i]) / h[i];
    }
    p.d[0] = 0.0;  // radial symmetry
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (del[i - 1] * del[i] <= 0.0) {
        p.d[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        p.d[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
      }
    }
    p.d[n - 1] = del[n - 2];
    return p;
  }

  double operator()(double xq, std::size_t& hint) const {
    while (hint + 2 < x.size() && x[hint + 1] < xq) ++hint;
    while (hint > 0 && x[hint] > xq) --hint;
    const double h = x[hint + 1] - x[hint];
    const double t = (xq - x[hint]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * y[hint] + h * h10 * d[hint] + h01 * y[hint + 1] +
           h * h11 * d[hint + 1];
  }
};

struct Tail {
  // u(r) ≈ amp * exp(-kappa (r - r0)) * (r/r0)^(-pw); either kappa or pw is 0
  double r0 = 0.0, amp = 0.0, kappa = 0.0, pw = 0.0;
  bool zero = true;

  double operator()(double r) const {
    if (zero) return 0.0;
    double v = amp;
    if (kappa > 0) v *= std::exp(-kappa * (r - r0));
    if (pw != 0) v *= std::pow(r / r0, -pw);
    return v;
  }
};

Tail fit_tail(const RadialFn& u, TailModel model) {
  Tail t;
  const auto& r = u.grid->nodes();
  const auto& v = u.values;
  const std::size_t n = r.size();
  t.r0 = r[n - 1];
  t.amp = v[n - 1];
  if (model == TailModel::Zero || std::abs(v[n - 1]) <
                                      1e-300) {
    t.zero = true;
    return t;
  }
  // fit over the last ~15% of the radius range
  const double r_lo = 0.85 * r[n - 1];
  std::size_t i0 = n - 1;
  while (i0 > 0 && r[i0 - 1] > r_lo) --i0;
  if (n - i0 < 4 || v[i0] <= 0.0 || v[n - 1] <= 0.0) {
    t.zero = true;
    return t;
  }
  for (std::size_t i = i0; i < n; ++i)
    if (v[i] <= 0.0) {
      t.zero = true;
      return t;
    }
  auto linfit = [&](bool logx) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
    for (std::size_t i = i0; i < n; ++i) {
      const double X = logx ? std::log(r[i]) : r[i];
      const double Y = std::log(v[i]);
      sx += X;
      sy += Y;
      sxx += X * X;
      sxy += X * Y;
      m += 1;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    // rms residual of the fit
    const double b = (sy - slope * sx) / m;
    double rss = 0;
    for (std::size_t i = i0; i < n; ++i) {
      const double X = logx ? std::log(r[i]) : r[i];
      const double e = std::log(v[i]) - slope * X - b;
      rss += e * e;
    }
    return std::pair<double, double>(slope, rss);
  };
  const auto [k_exp, rss_exp] = linfit(false);
  const auto [p_pow, rss_pow] = linfit(true);
  bool use_exp;
  switch (model) {
    case TailModel::Exponential: use_exp = true; break;
    case TailModel::Power: use_exp = false; break;
    default: use_exp = rss_exp <= rss_pow; break;
  }
  t.zero = false;
  if (use_exp)
    t.kappa = std::max(0.0, -k_exp);
  else
    t.pw = std::max(0.0, -p_pow);
  return t;
}

}  // namespace

double eval_at(const RadialFn& u, double r, TailModel tail) {
  if (r <= 0.0) return u.center;
  if (r > u.grid->r_max()) return fit_tail(u, tail)(r);
  Pchip p = Pchip::build(u);
  std::size_t hint = 0;
  return p(r, hint);
}

namespace {

RadialFn dilate(const RadialFn& u, double t, double amp_pow, TailModel tail) {
  if (!(t > 0.0)) fail(ErrorKind::InvalidArgument, "dilation needs t > 0");
  const double amp = std::pow(t, amp_pow);
  if (t == 1.0) return scaled(u, amp);
  const Pchip p = Pchip::build(u);
  const Tail tl = fit_tail(u, tail);
  const double r_max = u.grid->r_max();
  std::vector<double> v(u.size());
  std::size_t hint = 0;
  const auto& r = u.grid->nodes();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double rq = t * r[i];
    v[i] = amp * (rq <= r_max ? p(rq, hint) : tl(rq));
  }
  return RadialFn(u.grid, std::move(v), amp * u.center);
}

}  // namespace

RadialFn fibering_scale(const RadialFn& u, double t, TailModel tail) {
  return dilate(u, t, 0.5 * u.grid->dim(), tail);
}

RadialFn dscale(const RadialFn& u, double t, TailModel tail) {
  return dilate(u, t, 0.5 * (u.grid->dim() - 2), tail);
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

void write_csv(std::ostream& os, const RadialFn& f, const ProblemParams& params,
               std::optional<double> lambda) {
  char buf[64];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    os << buf;
  };
  os << "# N=" << params.N << " q=";
  put(params.q);
  os << " a=";
  put(params.a);
  os << " mu=";
  put(params.mu);
  if (lambda) {
    os << " lambda=";
    put(*lambda);
  }
  os << "\nr,value\n";
  os << "0,";
  put(f.center);
  os << "\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    put(f.grid->node(i));
    os << ",";
    put(f.values[i]);
    os << "\n";
  }
}

void write_csv_file(const std::string& path, const RadialFn& f,
                    const ProblemParams& params, std::optional<double> lambda) {
  std::ofstream os(path);
  if (!os) fail(ErrorKind::InvalidArgument, "cannot open " + path);
  write_csv(os, f, params, lambda);
}

RadialFn read_csv_file(const std::string& path, int N) {
  std::ifstream is(path);
  if (!is) fail(ErrorKind::InvalidArgument, "cannot open " + path);
  std::string line;
  std::vector<double> r, v;
  double center = 0.0;
  bool have_center = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'r') continue;
    std::istringstream ls(line);
    double a, b;
    char comma;
    if (!(ls >> a >> comma >> b)) continue;
    if (a == 0.0) {
      center = b;
      have_center = true;
    } else {
      r.push_back(a);
      v.push_back(b);
    }
  }
  if (r.size() < 3)
    fail(ErrorKind::InvalidArgument, "profile CSV too short: " + path);
  if (!have_center) center = v.front();
  auto g = RadialGrid::from_nodes(N, std::move(r));
  return RadialFn(std::move(g), std::move(v), center);
}

}  // namespace nls
