#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nls/grid.hpp"
#include "nls/params.hpp"

namespace nls {

/// How a profile continues past r_max when resampling needs values there.
enum class TailModel { Auto, Exponential, Power, Zero };

/// A radial profile sampled on a RadialGrid. The center value u(0) is kept
/// apart because the grid starts at r_1 > 0.
struct RadialFn {
  GridPtr grid;
  std::vector<double> values;
  double center = 0.0;

  RadialFn() = default;
  RadialFn(GridPtr g, std::vector<double> v, double c);

  /// Sample a callable u(r) on a grid; center from u(0) limit via u(r_1/2).
  static RadialFn sample(GridPtr g, const std::function<double(double)>& u);
  static RadialFn sample(GridPtr g, const std::function<double(double)>& u,
                         double center);

  std::size_t size() const { return values.size(); }
};

RadialFn operator-(const RadialFn& f, const RadialFn& g);
RadialFn operator+(const RadialFn& f, const RadialFn& g);
RadialFn scaled(const RadialFn& f, double c);
/// f + t*g on a common grid.
RadialFn axpy(const RadialFn& f, double t, const RadialFn& g);

/// (sphere_area ∫ |f|^p r^{N-1} dr)^{1/p}, p >= 1.
double lp_norm(const RadialFn& f, double p);
/// sphere_area ∫ |f|^p r^{N-1} dr  (the p-th power, no root).
double lp_norm_pow(const RadialFn& f, double p);

/// sphere_area ∫ (f')^2 r^{N-1} dr with 3-point stencils, one-sided at the
/// outer end; the center value acts as the r = 0 sample.
double grad_norm_sq(const RadialFn& f);

/// H¹ distance sqrt(‖∇(f-g)‖₂² + ‖f-g‖₂²); grids must match.
double h1_dist(const RadialFn& f, const RadialFn& g);

/// First derivative samples at the nodes (3-point nonuniform stencils).
std::vector<double> derivative(const RadialFn& f);

/// Coefficients of the radial operator  -u'' - (N-1)/r u' - lambda u
///   - c_q u^{q-1} - c_crit u^{2*-1}.
struct RadialOperator {
  double lambda = 0.0;
  double c_q = 0.0;
  double c_crit = 0.0;
};

/// Weighted sup-norm residual of the operator over interior nodes:
///   |−f'' − (N−1)/r f' − λf − c_q f^{q−1} − c_crit f^{2*−1}| / (1 + f^{2*−1}).
double ode_residual(const RadialFn& f, const RadialOperator& op,
                    const ProblemParams& params);

/// Residual of (1.5)'s radial form with the problem's own couplings.
double ode_residual(const RadialFn& f, double lambda,
                    const ProblemParams& params);

/// Mass-preserving dilation u_t(r) = t^{N/2} u(t r), resampled onto the same
/// grid by monotone cubic interpolation; the tail past r_max follows the
/// profile's decay model.
RadialFn fibering_scale(const RadialFn& u, double t,
                        TailModel tail = TailModel::Auto);

/// Gradient-preserving dilation t^{(N-2)/2} u(t r) (leaves ‖∇u‖₂ and
/// ‖u‖_{2*} unchanged, shrinks mass by t^{-2}).
RadialFn dscale(const RadialFn& u, double t, TailModel tail = TailModel::Auto);

/// Evaluate u at arbitrary radii by monotone cubic interpolation + tail model.
double eval_at(const RadialFn& u, double r, TailModel tail = TailModel::Auto);

/// CSV with '#' metadata comments and an "r,value" header; row r=0 carries
/// the center value.
void write_csv(std::ostream& os, const RadialFn& f, const ProblemParams& params,
               std::optional<double> lambda = std::nullopt);
void write_csv_file(const std::string& path, const RadialFn& f,
                    const ProblemParams& params,
                    std::optional<double> lambda = std::nullopt);
RadialFn read_csv_file(const std::string& path, int N);

}  // namespace nls
