#include "nls/params.hpp"

#include <cmath>

namespace nls {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::NumericFailure: return "numeric-failure";
    case ErrorKind::SearchFailure: return "search-failure";
    case ErrorKind::BranchLost: return "branch-lost";
    case ErrorKind::NoSolutionOnBranch: return "no-solution-on-branch";
    case ErrorKind::ThresholdExceeded: return "threshold-exceeded";
    case ErrorKind::CoefficientMismatch: return "coefficient-mismatch";
    case ErrorKind::MassCriticalDegenerate: return "mass-critical-degenerate";
    case ErrorKind::DegeneratePoint: return "degenerate-point";
    case ErrorKind::DomainError: return "domain-error";
    case ErrorKind::EstimateFailed: return "estimate-failed";
  }
  return "unknown";
}

double two_star_of(int N) { return 2.0 * N / (N - 2.0); }

double gamma_q_of(int N, double q) { return N * (q - 2.0) / (2.0 * q); }

double sphere_area(int N) {
  return 2.0 * std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N);
}

ProblemParams ProblemParams::make(int N, double q, double a, double mu) {
  if (N < 3) fail(ErrorKind::InvalidArgument, "dimension must satisfy N >= 3");
  const double ts = two_star_of(N);
  if (!(q > 2.0 && q < ts))
    fail(ErrorKind::InvalidArgument,
         "exponent q must lie in (2, " + std::to_string(ts) + "), got " +
             std::to_string(q));
  if (!(a > 0.0)) fail(ErrorKind::InvalidArgument, "mass level a must be > 0");
  if (!(mu >= 0.0)) fail(ErrorKind::InvalidArgument, "coupling mu must be >= 0");
  ProblemParams p;
  p.N = N;
  p.q = q;
  p.a = a;
  p.mu = mu;
  p.two_star = ts;
  p.gamma_q = gamma_q_of(N, q);
  return p;
}

}  // namespace nls
