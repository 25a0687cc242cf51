#pragma once

// Z-domain predictions for the closed loop G(z) = M c z / ((z + a)(z + b)).

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "zflow/controller.hpp"
#include "zflow/ztx.hpp"

namespace zflow {

inline constexpr double kDefaultSettlingBand = 0.01;

struct StepResponse {
  std::vector<double> values;  ///< values[k] is the queue at epoch k
  double steady_state = 0.0;
  std::optional<std::size_t> settling_epoch;
  double band = kDefaultSettlingBand;
};

inline RationalZ transfer_function(const ControllerParams& p) {
  const GainDesign d = design_gain(p);
  return RationalZ{Polynomial{p.M * d.c, 0.0}, Polynomial{1.0, p.a} * Polynomial{1.0, p.b}};
}

inline double steady_state_queue(const ControllerParams& p) {
  validate(p);
  return p.rho * p.Q;
}

/// Smallest k from which every value stays within band * |target| of target.
inline std::optional<std::size_t> settling_time(std::span<const double> values, double target, double band) {
  const double tol = band * std::abs(target);
  std::optional<std::size_t> epoch;
  for (std::size_t k = values.size(); k-- > 0;) {
    if (std::abs(values[k] - target) > tol) break;
    epoch = k;
  }
  return epoch;
}

inline StepResponse predicted_queue(const ControllerParams& p, std::size_t horizon,
                                    double band = kDefaultSettlingBand) {
  const RationalZ response = transfer_function(p) * unit_step();
  StepResponse r;
  r.values = impulse_sequence(response, horizon);
  r.steady_state = final_value(response);
  r.band = band;
  r.settling_epoch = settling_time(r.values, r.steady_state, band);
  return r;
}

}  // namespace zflow
