#pragma once

#include <stdexcept>
#include <string>

namespace nls {

enum class ErrorKind {
  InvalidArgument,
  NumericFailure,
  SearchFailure,
  BranchLost,
  NoSolutionOnBranch,
  ThresholdExceeded,
  CoefficientMismatch,
  MassCriticalDegenerate,
  DegeneratePoint,
  DomainError,
  EstimateFailed,
};

const char* to_string(ErrorKind k);

/// Error with a machine-readable kind; the CLI maps these to structured JSON.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) {
  throw Error(k, msg);
}

/// Problem data for -Δu = λu + μ|u|^{q-2}u + |u|^{2s-2}u with mass ‖u‖₂² = a²,
/// where 2s is the critical exponent 2N/(N-2).
struct ProblemParams {
  int N = 3;          // dimension, >= 3
  double q = 2.5;     // subcritical-to-critical exponent, 2 < q < two_star
  double a = 1.0;     // mass level, > 0
  double mu = 0.0;    // coupling of the q-term, >= 0
  double two_star = 6.0;
  double gamma_q = 0.3;  // N(q-2)/(2q)

  static ProblemParams make(int N, double q, double a, double mu);

  double mass_critical_q() const { return 2.0 + 4.0 / N; }
  bool is_mass_critical(double tol = 1e-12) const {
    return std::abs(q - mass_critical_q()) <= tol * q;
  }
  /// q·γ_q − 2: negative below the mass-critical exponent, zero at it.
  double q_gamma_minus_2() const { return q * gamma_q - 2.0; }
};

double two_star_of(int N);
double gamma_q_of(int N, double q);

/// Surface area of the unit sphere in R^N: 2 π^{N/2} / Γ(N/2).
double sphere_area(int N);

}  // namespace nls
