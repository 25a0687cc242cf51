// Designs the controller for one reference line, then compares the
// closed-form rate law with the long-division inverse of lambda(z) and
// prints both queue trajectories.

#include <cstdio>

#include "zflow/zflow.hpp"

int main() {
  zflow::ControllerParams p;
  p.a = -0.2;
  p.b = -0.1;
  p.Q = 1000.0;
  p.M = 10.0;

  const auto design = zflow::design_gain(p);
  std::printf("c = %.6g, a1 = %.6g, a2 = %.6g\n", design.c, design.residues.a1, design.residues.a2);

  const auto series = zflow::impulse_sequence(zflow::lambda_transform(design), 10);
  const auto trace = zflow::run_scenario(zflow::Scenario::constant(p, 14.5));
  std::printf("%3s %14s %14s %12s %12s\n", "k", "lambda(k)", "long division", "q_time", "q_zpred");
  for (std::size_t k = 0; k <= 10; ++k) {
    const auto& rec = trace.records[k];
    std::printf("%3zu %14.6f %14.6f %12.4f %12.4f\n", k, zflow::lambda_rate(design, k), series[k], rec.q_time(),
                rec.q_zpred());
  }
  std::printf("final value of G(z)S(z) = %.9g\n", zflow::final_value(zflow::transfer_function(p) * zflow::unit_step()));
  return 0;
}
