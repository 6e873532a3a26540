#include <cstdio>
#include <cmath>
#include "nls/radial_ode.hpp"

using namespace nls;

int main() {
  const ProblemParams p = ProblemParams::make(3, 2.5, 1.0, 1e-4);
  const double lam = -2.4960333825762385e-07;
  const RadialField f{p, RadialOperator{lam, p.mu, 1.0}};
  const double kap = std::sqrt(-lam);
  const double b0 = 245.474190;
  for (double kf : {6.0, 10.0}) {
    std::printf("== r_fit = %.0f/kappa\n", kf);
    for (int i = -8; i <= 8; ++i) {
      const double b = b0 * (1.0 + i * 5e-8);
      const double wr = wronskian_mismatch(f, b, kf / kap, 40.0 / kap);
      std::printf("  db=%+.1e wr=%+.6e\n", i * 5e-8, wr);
    }
  }
  return 0;
}
