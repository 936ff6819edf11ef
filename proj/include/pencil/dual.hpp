#pragma once

#include <complex>

#include "pencil/scalar.hpp"

namespace pencil {

/// Forward-mode dual number over the complex field: v + d*eps, eps^2 = 0.
/// Every operation below is holomorphic, so d carries the complex derivative.
struct Dual {
  Complex v{};
  Complex d{};

  Dual() = default;
  Dual(Complex value) : v(value) {}  // NOLINT: implicit lift of constants
  Dual(double value) : v(value) {}   // NOLINT
  Dual(Complex value, Complex deriv) : v(value), d(deriv) {}

  static Dual variable(Complex value) { return {value, Complex(1.0)}; }

  friend Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
  friend Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
  friend Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    const Complex inv = Complex(1.0) / b.v;
    return {a.v * inv, (a.d * b.v - a.v * b.d) * inv * inv};
  }
  Dual& operator+=(const Dual& b) { return *this = *this + b; }
  Dual& operator-=(const Dual& b) { return *this = *this - b; }
  Dual& operator*=(const Dual& b) { return *this = *this * b; }
};

/// Square root on the branch whose value is `root` (so root^2 == a.v).
inline Dual sqrt_on_branch(const Dual& a, Complex root) { return {root, a.d / (2.0 * root)}; }

}  // namespace pencil
