#include "nls/grid.hpp"

#include <algorithm>
#include <cmath>

namespace nls {

RadialGrid::RadialGrid(int N, std::vector<double> nodes,
                       std::vector<double> weights, double r_max)
    : N_(N),
      sphere_area_(nls::sphere_area(N)),
      r_max_(r_max),
      nodes_(std::move(nodes)),
      weights_(std::move(weights)) {}

double RadialGrid::integrate(const std::vector<double>& f) const {
  double acc = 0.0;
  const std::size_t n = nodes_.size();
  for (std::size_t i = 0; i < n; ++i) acc += weights_[i] * f[i];
  return acc;
}

GridPtr make_grid(const ProblemParams& params, double r_max, std::size_t n,
                  double stretch) {
  if (!(r_max > 0.0)) fail(ErrorKind::InvalidArgument, "r_max must be > 0");
  if (n < 100) fail(ErrorKind::InvalidArgument, "grid needs at least 100 nodes");
  if (!(stretch >= 1.0))
    fail(ErrorKind::InvalidArgument, "stretch must be >= 1");

  std::size_t M = n + (n % 2);  // composite Simpson needs an even interval count
  const double beta = M * std::log(stretch);

  std::vector<double> nodes(M), weights(M);
  const double h = 1.0 / static_cast<double>(M);
  const double em1 = std::expm1(beta);
  for (std::size_t i = 1; i <= M; ++i) {
    const double xi = i * h;
    double r, dr;  // R(ξ), R'(ξ)
    if (beta < 1e-12) {
      r = r_max * xi;
      dr = r_max;
    } else {
      r = r_max * std::expm1(beta * xi) / em1;
      dr = r_max * beta * std::exp(beta * xi) / em1;
    }
    const double simpson = (i == M) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    nodes[i - 1] = r;
    weights[i - 1] = simpson * (h / 3.0) * dr * std::pow(r, params.N - 1);
  }
  nodes.back() = r_max;  // exact endpoint
  return std::make_shared<RadialGrid>(params.N, std::move(nodes),
                                      std::move(weights), r_max);
}

GridPtr make_graded_grid(const ProblemParams& params, double r_core,
                         double r_max, std::size_t per_efold,
                         std::size_t n_min, std::size_t n_max) {
  r_core = std::min(std::max(r_core, 1e-14 * r_max), r_max);
  const double beta = std::max(1.0, std::log(r_max / r_core) + 3.0);
  std::size_t n = static_cast<std::size_t>(beta * per_efold);
  n = std::clamp(n, n_min, n_max);
  const double stretch = std::exp(beta / static_cast<double>(n));
  return make_grid(params, r_max, n, stretch);
}

GridPtr RadialGrid::from_nodes(int N, std::vector<double> nodes) {
  if (nodes.size() < 3 || nodes.front() <= 0.0 ||
      !std::is_sorted(nodes.begin(), nodes.end()))
    fail(ErrorKind::InvalidArgument,
         "from_nodes needs sorted positive radii, r_1 > 0");
  const std::size_t n = nodes.size();
  std::vector<double> w(n, 0.0);
  // Hat-function weights against the measure r^{N-1} dr, cell by cell.
  // Moments over [ra, rb]: M0 = ∫ r^{N-1}, M1 = ∫ r^N.
  auto m0 = [N](double ra, double rb) {
    return (std::pow(rb, N) - std::pow(ra, N)) / N;
  };
  auto m1 = [N](double ra, double rb) {
    return (std::pow(rb, N + 1) - std::pow(ra, N + 1)) / (N + 1);
  };
  // leading cell [0, r_1]: linear through (0-extension) — treat f as constant
  // f(r_1) there (profiles are flat at the origin; center handled separately)
  w[0] += m0(0.0, nodes[0]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double ra = nodes[i], rb = nodes[i + 1], dr = rb - ra;
    const double M0 = m0(ra, rb), M1 = m1(ra, rb);
    // f(r) ≈ f_a (rb - r)/dr + f_b (r - ra)/dr
    w[i] += (rb * M0 - M1) / dr;
    w[i + 1] += (M1 - ra * M0) / dr;
  }
  const double r_max = nodes.back();
  return std::make_shared<RadialGrid>(N, std::move(nodes), std::move(w), r_max);
}

}  // namespace nls
