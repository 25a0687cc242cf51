#pragma once

// Fluid model of the bottleneck queue and the smoothed RTT estimator.

#include <algorithm>
#include <span>

#include "zflow/controller.hpp"
#include "zflow/error.hpp"

namespace zflow {

struct PlantState {
  double q = 0.0;      ///< queue level, packets (real-valued)
  double rtt = 0.0;    ///< current RTT estimate, ms
  double drops = 0.0;  ///< cumulative overflow volume, packets
  double arrived = 0.0;  ///< cumulative applied inflow volume
  double served = 0.0;   ///< cumulative applied outflow volume
  Mode mode = Mode::analytic;

  friend bool operator==(const PlantState&, const PlantState&) = default;
};

/// Service rate of the bottleneck node: the slowest hop on the path.
inline double min_service_rate(std::span<const double> rates) {
  if (rates.empty()) throw Error(ErrorCode::EmptyRateList, "no service rates given");
  return *std::min_element(rates.begin(), rates.end());
}

inline double rtt_update(double prev, double measured, double alpha) {
  return alpha * prev + (1.0 - alpha) * measured;
}

/**
 * One epoch of q(k+1) = q(k) + (u0 - ub) rtt.
 *
 * Physical mode clamps the queue to [0, capacity]. Overflow goes to `drops`;
 * an empty queue serves only what it holds plus what arrives, so `served`
 * grows by less than ub * rtt.
 */
inline PlantState queue_step(const PlantState& s, double u0, double ub, double rtt, double capacity) {
  PlantState next = s;
  const double inflow = u0 * rtt;
  const double outflow = ub * rtt;
  const double raw = s.q + (u0 - ub) * rtt;
  next.arrived += inflow;
  if (s.mode == Mode::analytic) {
    next.q = raw;
    next.served += outflow;
    return next;
  }
  if (raw > capacity) {
    next.q = capacity;
    next.drops += raw - capacity;
    next.served += outflow;
  } else if (raw < 0.0) {
    next.q = 0.0;
    next.served += s.q + inflow;
  } else {
    next.q = raw;
    next.served += outflow;
  }
  return next;
}

/// Analytic-mode step driven directly by the rate excess lambda = u0 - ub.
inline PlantState queue_step_excess(const PlantState& s, double excess, double rtt) {
  if (s.mode != Mode::analytic) throw Error(ErrorCode::InvariantViolation, "excess-driven steps are analytic only");
  PlantState next = s;
  next.q = s.q + excess * rtt;
  return next;
}

}  // namespace zflow
