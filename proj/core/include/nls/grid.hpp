#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "nls/params.hpp"

namespace nls {

/// Radial quadrature grid for ∫₀^{r_max} f(r) r^{N-1} dr.
///
/// Nodes are the images of a uniform ξ-grid under a smooth (geometric)
/// stretching map; weights are composite-Simpson weights in ξ times the
/// Jacobian R'(ξ) R(ξ)^{N-1}, so they are strictly positive and the rule
/// is high-order for smooth integrands. The r = 0 endpoint carries zero
/// weight (the Jacobian vanishes there) and is not stored; r_1 > 0.
class RadialGrid {
 public:
  RadialGrid(int N, std::vector<double> nodes, std::vector<double> weights,
             double r_max);

  int dim() const { return N_; }
  double sphere_area() const { return sphere_area_; }
  double r_max() const { return r_max_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  /// ∫₀^{r_max} f(r) r^{N-1} dr from samples at the nodes (no sphere factor).
  double integrate(const std::vector<double>& f) const;

  /// Quadrature grid over arbitrary strictly increasing nodes (used when a
  /// profile arrives from a CSV): piecewise-linear weights with exact
  /// r^{N-1} moments per cell. Positive weights, second-order accurate.
  static std::shared_ptr<const RadialGrid> from_nodes(int N,
                                                      std::vector<double> nodes);

 private:
  int N_;
  double sphere_area_;
  double r_max_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Build a grid with n nodes on (0, r_max]; `stretch` >= 1 is the geometric
/// ratio of consecutive spacings (1 = uniform, >1 clusters nodes near 0).
GridPtr make_grid(const ProblemParams& params, double r_max, std::size_t n,
                  double stretch = 1.0);

/// Grid resolving scales from ~r_core up to r_max with roughly
/// `per_efold` nodes per e-fold of radius (log-uniform in the graded region).
GridPtr make_graded_grid(const ProblemParams& params, double r_core,
                         double r_max, std::size_t per_efold = 1500,
                         std::size_t n_min = 4000, std::size_t n_max = 120000);

}  // namespace nls
