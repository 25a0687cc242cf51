#pragma once

// Sending-rate controller: stability gate, gain design and the closed-form
// rate law u0(k) = ub(k) + lambda(k).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "zflow/error.hpp"
#include "zflow/ztx.hpp"

namespace zflow {

/// RTT smoothing the closed-form law is built for; (8z - 7) cancels its pole.
inline constexpr double kRttSmoothing = 7.0 / 8.0;
inline constexpr double kDefaultMargin = 0.8;

enum class Mode { analytic, physical };

constexpr const char* to_string(Mode m) noexcept { return m == Mode::analytic ? "analytic" : "physical"; }

struct ControllerParams {
  double a = 0.0;
  double b = 0.0;
  double Q = 0.0;  ///< buffer capacity, packets
  double M = 0.0;  ///< RTT measurement, ms
  double alpha = kRttSmoothing;
  double rho = kDefaultMargin;

  friend bool operator==(const ControllerParams&, const ControllerParams&) = default;
};

enum class Rejection { none, non_finite, pole_on_unit_circle, pole_outside_unit_circle, repeated_pole };

constexpr const char* to_string(Rejection r) noexcept {
  switch (r) {
    case Rejection::none: return "ok";
    case Rejection::non_finite: return "non-finite pole parameter";
    case Rejection::pole_on_unit_circle: return "pole on unit circle";
    case Rejection::pole_outside_unit_circle: return "pole outside unit circle";
    case Rejection::repeated_pole: return "repeated pole";
  }
  return "unknown";
}

struct StabilityVerdict {
  Rejection reason = Rejection::none;
  std::string detail;

  [[nodiscard]] bool ok() const noexcept { return reason == Rejection::none; }
  explicit operator bool() const noexcept { return ok(); }
};

/// The closed loop has poles -a and -b: both must be inside the unit disc and distinct.
inline StabilityVerdict check_stability(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) return {Rejection::non_finite, "a and b must be finite"};
  for (auto [name, v] : {std::pair{"a", a}, std::pair{"b", b}}) {
    if (std::abs(v) == 1.0) return {Rejection::pole_on_unit_circle, std::string("|") + name + "| = 1"};
    if (std::abs(v) > 1.0) return {Rejection::pole_outside_unit_circle, std::string("|") + name + "| > 1"};
  }
  if (std::abs(a - b) < kPoleTolerance) return {Rejection::repeated_pole, "a = b"};
  return {};
}

/// Throws UnstableParams or InvalidParams naming the violated constraint.
inline void validate(const ControllerParams& p) {
  if (auto verdict = check_stability(p.a, p.b); !verdict)
    throw Error(ErrorCode::UnstableParams, std::string(to_string(verdict.reason)) + " (" + verdict.detail + ")");
  if (!(p.Q > 0.0) || !std::isfinite(p.Q)) throw Error(ErrorCode::InvalidParams, "Q must be > 0");
  if (!(p.M > 0.0) || !std::isfinite(p.M)) throw Error(ErrorCode::InvalidParams, "M must be > 0");
  if (!(p.rho > 0.0 && p.rho <= 1.0)) throw Error(ErrorCode::InvalidParams, "rho must satisfy 0 < rho <= 1");
  if (p.alpha != kRttSmoothing)
    throw Error(ErrorCode::InvalidParams, "alpha must be 7/8 for the closed-form rate law");
}

struct GainDesign {
  ControllerParams params;
  double c = 0.0;
  Residues residues{};
  std::pair<double, double> poles{};
  double steady_state_queue = 0.0;

  friend bool operator==(const GainDesign&, const GainDesign&) = default;
};

/// Numerator of f(z) that cancels the RTT smoothing pole: (z - alpha)/(1 - alpha), i.e. 8z - 7.
inline Polynomial rtt_cancelling_numerator(double alpha) {
  return Polynomial{1.0 / (1.0 - alpha), -alpha / (1.0 - alpha)};
}

inline GainDesign design_gain(const ControllerParams& p) {
  validate(p);
  GainDesign d;
  d.params = p;
  d.c = p.rho * p.Q * (1.0 + p.a) * (1.0 + p.b) / p.M;
  d.poles = {-p.a, -p.b};
  d.residues = partial_fractions(rtt_cancelling_numerator(p.alpha), -p.a, -p.b);
  d.steady_state_queue = p.rho * p.Q;
  return d;
}

/// lambda(z) = c z (8z - 7) / ((z + a)(z + b)).
inline RationalZ lambda_transform(const GainDesign& d) {
  const auto& p = d.params;
  return RationalZ{Polynomial{d.c} * Polynomial{1.0, 0.0} * rtt_cancelling_numerator(p.alpha),
                   Polynomial{1.0, p.a} * Polynomial{1.0, p.b}};
}

/// Rate excess over the bottleneck at epoch k: c (a1 (-a)^k + a2 (-b)^k).
inline double lambda_rate(const GainDesign& d, std::size_t k) {
  const auto& r = d.residues;
  const double e = static_cast<double>(k);
  return d.c * (r.a1 * std::pow(r.pole1, e) + r.a2 * std::pow(r.pole2, e));
}

/// Analytic mode may return negative rates; physical mode clamps at zero.
inline double send_rate(const GainDesign& d, double ub, std::size_t k, Mode mode) {
  const double u0 = ub + lambda_rate(d, k);
  return mode == Mode::physical ? std::max(0.0, u0) : u0;
}

}  // namespace zflow
