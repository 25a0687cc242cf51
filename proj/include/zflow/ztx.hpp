#pragma once

/**
 * @file ztx.hpp
 * @brief Real-coefficient rational functions of z.
 *
 * Polynomials store coefficients in descending powers of z, so
 * `Polynomial{8, -7}` is 8z - 7 and `Polynomial{1, -0.3, 0.02}` is
 * z^2 - 0.3z + 0.02. Only real poles are handled by the partial-fraction
 * routine; stability checks work for any degree through the Schur-Cohn
 * recursion, which never needs the roots themselves.
 */

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zflow/error.hpp"

namespace zflow {

/// Distance below which a denominator value or a pole separation counts as zero.
inline constexpr double kPoleTolerance = 1e-12;
/// Agreement expected between the series and direct evaluation of a rational.
inline constexpr double kSeriesTolerance = 1e-9;

template <std::floating_point T>
class BasicPolynomial {
 public:
  using value_type = T;

  BasicPolynomial() : coeffs_{T{0}} {}
  BasicPolynomial(std::initializer_list<T> coeffs) : coeffs_(coeffs) { normalize(); }
  explicit BasicPolynomial(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

  /// Monic polynomial with the given roots: (z - r0)(z - r1)...
  static BasicPolynomial from_roots(std::span<const T> roots) {
    BasicPolynomial p{T{1}};
    for (T r : roots) p = p * BasicPolynomial{T{1}, -r};
    return p;
  }

  [[nodiscard]] std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  [[nodiscard]] bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == T{0}; }
  [[nodiscard]] T leading() const noexcept { return coeffs_.front(); }
  [[nodiscard]] T constant_term() const noexcept { return coeffs_.back(); }
  [[nodiscard]] std::span<const T> coefficients() const noexcept { return coeffs_; }

  /// Coefficient of z^power (zero beyond the degree).
  [[nodiscard]] T coefficient(std::size_t power) const noexcept {
    return power > degree() ? T{0} : coeffs_[degree() - power];
  }

  [[nodiscard]] T operator()(T z) const noexcept {
    T acc{0};
    for (T c : coeffs_) acc = acc * z + c;
    return acc;
  }

  /// Sum of coefficient magnitudes; a scale for relative tolerances.
  [[nodiscard]] T magnitude() const noexcept {
    T s{0};
    for (T c : coeffs_) s += std::abs(c);
    return s;
  }

  /// Quotient of synthetic division by (z - root). The remainder is dropped.
  [[nodiscard]] BasicPolynomial deflate(T root) const {
    if (degree() == 0) return BasicPolynomial{};
    std::vector<T> q(coeffs_.size() - 1);
    T carry{0};
    for (std::size_t i = 0; i < q.size(); ++i) {
      carry = carry * root + coeffs_[i];
      q[i] = carry;
    }
    return BasicPolynomial{std::move(q)};
  }

  friend BasicPolynomial operator+(const BasicPolynomial& lhs, const BasicPolynomial& rhs) {
    const std::size_t n = std::max(lhs.coeffs_.size(), rhs.coeffs_.size());
    std::vector<T> out(n, T{0});
    for (std::size_t p = 0; p < n; ++p) out[n - 1 - p] = lhs.coefficient(p) + rhs.coefficient(p);
    return BasicPolynomial{std::move(out)};
  }

  friend BasicPolynomial operator-(const BasicPolynomial& lhs, const BasicPolynomial& rhs) {
    return lhs + rhs * BasicPolynomial{T{-1}};
  }

  friend BasicPolynomial operator*(const BasicPolynomial& lhs, const BasicPolynomial& rhs) {
    std::vector<T> out(lhs.coeffs_.size() + rhs.coeffs_.size() - 1, T{0});
    for (std::size_t i = 0; i < lhs.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) out[i + j] += lhs.coeffs_[i] * rhs.coeffs_[j];
    return BasicPolynomial{std::move(out)};
  }

  friend bool operator==(const BasicPolynomial&, const BasicPolynomial&) = default;

 private:
  void normalize() {
    auto first = std::find_if(coeffs_.begin(), coeffs_.end(), [](T c) { return c != T{0}; });
    coeffs_.erase(coeffs_.begin(), first);
    if (coeffs_.empty()) coeffs_.push_back(T{0});
  }

  std::vector<T> coeffs_;
};

template <std::floating_point T>
class BasicRationalZ {
 public:
  using polynomial_type = BasicPolynomial<T>;

  BasicRationalZ(polynomial_type numerator, polynomial_type denominator)
      : num_(std::move(numerator)), den_(std::move(denominator)) {
    if (den_.is_zero()) throw Error(ErrorCode::ZeroDenominator, "rational with zero denominator");
  }

  [[nodiscard]] const polynomial_type& numerator() const noexcept { return num_; }
  [[nodiscard]] const polynomial_type& denominator() const noexcept { return den_; }
  [[nodiscard]] bool is_proper() const noexcept { return num_.degree() <= den_.degree(); }

  friend BasicRationalZ operator*(const BasicRationalZ& lhs, const BasicRationalZ& rhs) {
    return BasicRationalZ{lhs.num_ * rhs.num_, lhs.den_ * rhs.den_};
  }

  friend bool operator==(const BasicRationalZ&, const BasicRationalZ&) = default;

 private:
  polynomial_type num_;
  polynomial_type den_;
};

template <std::floating_point T>
struct BasicResidues {
  T a1;
  T a2;
  T pole1;
  T pole2;

  friend bool operator==(const BasicResidues&, const BasicResidues&) = default;
};

using Polynomial = BasicPolynomial<double>;
using RationalZ = BasicRationalZ<double>;
using Residues = BasicResidues<double>;

/// Z-transform of the unit step, z / (z - 1).
template <std::floating_point T = double>
BasicRationalZ<T> unit_step() {
  return {BasicPolynomial<T>{T{1}, T{0}}, BasicPolynomial<T>{T{1}, T{-1}}};
}

template <std::floating_point T>
T eval_rational(const BasicRationalZ<T>& r, T z) {
  const T den = r.denominator()(z);
  if (std::abs(den) < T(kPoleTolerance))
    throw Error(ErrorCode::PoleAtEvaluationPoint, "denominator vanishes at z = " + std::to_string(z));
  return r.numerator()(z) / den;
}

/**
 * Coefficients h(0..K) of r(z) = sum h(k) z^-k, by long division in powers
 * of z^-1. Unstable rationals produce their divergent sequence unchanged.
 */
template <std::floating_point T>
std::vector<T> impulse_sequence(const BasicRationalZ<T>& r, std::size_t horizon) {
  if (!r.is_proper()) throw Error(ErrorCode::ImproperRational, "numerator degree exceeds denominator degree");
  const auto& den = r.denominator();
  const auto& num = r.numerator();
  const std::size_t n = den.degree();
  // Dividing both sides by z^n turns descending-power coefficient j into the
  // coefficient of z^-j.
  const auto num_at = [&](std::size_t j) { return j <= n ? num.coefficient(n - j) : T{0}; };
  const auto den_at = [&](std::size_t j) { return den.coefficient(n - j); };

  std::vector<T> h(horizon + 1);
  for (std::size_t k = 0; k <= horizon; ++k) {
    T acc = num_at(k);
    for (std::size_t j = 1; j <= std::min(k, n); ++j) acc -= den_at(j) * h[k - j];
    h[k] = acc / den_at(0);
  }
  return h;
}

/**
 * Residues A, B with num(z)/((z-p1)(z-p2)) = A/(z-p1) + B/(z-p2).
 * Both poles must be real and distinct, and num at most linear.
 */
template <std::floating_point T>
BasicResidues<T> partial_fractions(const BasicPolynomial<T>& num, T pole1, T pole2) {
  if (num.degree() > 1) throw Error(ErrorCode::ImproperRational, "partial fractions need a numerator of degree <= 1");
  if (std::abs(pole1 - pole2) < T(kPoleTolerance)) throw Error(ErrorCode::RepeatedPole, "poles coincide");

  const BasicResidues<T> res{num(pole1) / (pole1 - pole2), num(pole2) / (pole2 - pole1), pole1, pole2};

  const T reach = std::max(std::abs(pole1), std::abs(pole2)) + T{1};
  for (T z : {reach, -reach - T(0.5)}) {
    const T lhs = num(z) / ((z - pole1) * (z - pole2));
    const T rhs = res.a1 / (z - pole1) + res.a2 / (z - pole2);
    const T scale = std::max({T{1}, std::abs(lhs), std::abs(res.a1), std::abs(res.a2)});
    if (std::abs(lhs - rhs) > T(kSeriesTolerance) * scale)
      throw Error(ErrorCode::InvariantViolation, "partial-fraction reconstruction failed");
  }
  return res;
}

/// True when every root of p lies strictly inside the unit disc (Schur-Cohn).
template <std::floating_point T>
bool is_schur_stable(const BasicPolynomial<T>& p) {
  if (p.is_zero()) return false;
  // Ascending coefficients c[0..n].
  std::vector<T> c(p.coefficients().rbegin(), p.coefficients().rend());
  while (c.size() > 1) {
    const std::size_t n = c.size() - 1;
    const T lead = c[n];
    const T tail = c[0];
    if (std::abs(tail) >= std::abs(lead)) return false;
    // (lead * p(z) - tail * reversed p(z)) / z has the same number of roots
    // inside the disc, one degree lower.
    std::vector<T> next(n);
    T scale{0};
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = lead * c[i + 1] - tail * c[n - i - 1];
      scale = std::max(scale, std::abs(next[i]));
    }
    for (T& x : next) x /= scale;
    c = std::move(next);
  }
  return true;
}

/// lim_{z->1} (z - 1) r(z), provided every remaining pole is inside the unit disc.
template <std::floating_point T>
T final_value(const BasicRationalZ<T>& r) {
  const auto& den = r.denominator();
  const bool step_pole = std::abs(den(T{1})) <= T(kPoleTolerance) * std::max(T{1}, den.magnitude());
  const BasicRationalZ<T> settled =
      step_pole ? BasicRationalZ<T>{r.numerator(), den.deflate(T{1})}
                : BasicRationalZ<T>{r.numerator() * BasicPolynomial<T>{T{1}, T{-1}}, den};
  if (!is_schur_stable(settled.denominator()))
    throw Error(ErrorCode::FinalValueInapplicable, "a pole of (z - 1) r(z) lies on or outside the unit circle");
  return eval_rational(settled, T{1});
}

}  // namespace zflow
