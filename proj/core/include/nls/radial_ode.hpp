#pragma once

#include <optional>
#include <vector>

#include "nls/radial_fn.hpp"

namespace nls {

/// Radial field u'' + (N-1)/r u' + lambda u + c_q u^{q-1} + c_crit u^{2*-1} = 0.
struct RadialField {
  ProblemParams params;
  RadialOperator op;
};

enum class Outcome { Crossing, Floating, Decaying };

const char* to_string(Outcome o);

struct ClassifyResult {
  Outcome outcome = Outcome::Decaying;
  double r_stop = 0.0;  // crossing radius, turning radius, or r_end
  double u_end = 0.0;
  double du_end = 0.0;
};

/// Integrate from a series start at the origin and classify the shot:
/// Crossing (u hits 0), Floating (u' turns >= 0 while u > 0, or u fails to
/// decay), or Decaying (reaches r_end still positive and descending).
ClassifyResult classify_shot(const RadialField& field, double b, double r_end,
                             double rtol = 1e-11);

struct MatchOptions {
  double k_fit = 10.0;     // height-refinement radius in units of 1/sqrt(-lambda)
  double k_end = 40.0;     // outer radius in the same units
  double core_mult = 50.0; // pull the match down to ~core_mult * peak scale
                           // for concentrated profiles (forward error grows
                           // algebraically across the peak's far field)
  double rtol = 1e-12;
  int max_secant = 40;
};

struct MatchedShot {
  double center = 0.0;     // refined separatrix height b*
  double wronskian = 0.0;  // log-derivative mismatch at the fitting radius
  double tail_amp = 0.0;   // amplitude of the matched decaying tail at r_end
  double r_fit = 0.0;
  double r_end = 0.0;
};

/// Refine a bracketed separatrix [b_lo, b_hi] (different classifications at
/// the ends) by classification bisection followed by a secant on the
/// forward/backward Wronskian mismatch at r_fit. The backward sweep starts
/// on the linear decaying asymptote at k_end/sqrt(-lambda) and is amplitude-
/// iterated so the slowly-decaying q-nonlinearity is felt at the physical
/// amplitude (essential for q < 3 in N = 3).
MatchedShot match_separatrix(const RadialField& field, double b_lo, double b_hi,
                             const MatchOptions& opt = {});

/// Sample the matched solution on a grid: forward integration up to r_fit,
/// scaled backward integration beyond it.
RadialFn sample_matched(const RadialField& field, const MatchedShot& shot,
                        GridPtr grid, const MatchOptions& opt = {});

/// Evaluate the matched solution at arbitrary sorted radii.
std::vector<double> eval_matched(const RadialField& field,
                                 const MatchedShot& shot,
                                 const std::vector<double>& radii,
                                 const MatchOptions& opt = {});

/// Normalized forward/backward log-derivative mismatch at r_fit for a trial
/// center; positive on the floating side. Diagnostic surface for tests.
double wronskian_mismatch(const RadialField& field, double b, double r_fit,
                          double r_end, double rtol = 1e-12);

}  // namespace nls
