#pragma once

// Test-only reference computations, written independently of the library
// code paths they check.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "zflow/error.hpp"

namespace oracle {

/// Sequence of z/(z - p): p^k.
inline std::vector<long double> geometric(long double p, std::size_t horizon) {
  std::vector<long double> h(horizon + 1);
  long double v = 1.0L;
  for (auto& x : h) {
    x = v;
    v *= p;
  }
  return h;
}

inline std::vector<long double> convolve(const std::vector<long double>& x, const std::vector<long double>& y) {
  std::vector<long double> out(x.size(), 0.0L);
  for (std::size_t k = 0; k < x.size(); ++k)
    for (std::size_t j = 0; j <= k; ++j) out[k] += x[j] * y[k - j];
  return out;
}

/**
 * Inverse transform of gain * z^m / prod (z - p_i) with m <= number of poles,
 * built as a product of z/(z - p_i) factors convolved in the time domain and
 * shifted by (poles - m) epochs.
 */
inline std::vector<long double> inverse_of_factored(long double gain, std::size_t zeros_at_origin,
                                                    const std::vector<long double>& poles, std::size_t horizon) {
  std::vector<long double> acc(horizon + 1, 0.0L);
  acc[0] = 1.0L;
  for (long double p : poles) acc = convolve(acc, geometric(p, horizon));
  const std::size_t shift = poles.size() - zeros_at_origin;
  std::vector<long double> out(horizon + 1, 0.0L);
  for (std::size_t k = shift; k <= horizon; ++k) out[k] = gain * acc[k - shift];
  return out;
}

/// Residues from coefficient matching n1 z + n0 = A (z - p2) + B (z - p1), by Cramer's rule.
struct Residues2 {
  double a;
  double b;
};
inline Residues2 residues_by_matching(double n1, double n0, double p1, double p2) {
  // [1 1; -p2 -p1] [A B]^T = [n1 n0]^T
  const double det = -p1 + p2;
  return {(n1 * -p1 - n0) / det, (n0 + p2 * n1) / det};
}

/// Largest root magnitude of c2 z^2 + c1 z + c0 (c2 != 0).
inline double max_root_magnitude(double c2, double c1, double c0) {
  const std::complex<double> disc = std::sqrt(std::complex<double>(c1 * c1 - 4 * c2 * c0));
  const auto r1 = (-c1 + disc) / (2 * c2);
  const auto r2 = (-c1 - disc) / (2 * c2);
  return std::max(std::abs(r1), std::abs(r2));
}

/// Brute-force settling: first k where every later value lies in the band.
inline std::optional<std::size_t> settling_brute(const std::vector<double>& v, double target, double band) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    bool inside = true;
    for (std::size_t j = k; j < v.size(); ++j) inside = inside && std::abs(v[j] - target) <= band * std::abs(target);
    if (inside) return k;
  }
  return std::nullopt;
}

}  // namespace oracle

template <typename F>
std::optional<zflow::ErrorCode> error_code_of(F&& f) {
  try {
    std::invoke(std::forward<F>(f));
  } catch (const zflow::Error& e) {
    return e.code();
  }
  return std::nullopt;
}
