#pragma once

#include <cmath>
#include <complex>

#include <gmpxx.h>

namespace pencil {

using Complex = std::complex<double>;
using Rational = mpq_class;

/// Backend description. A computation runs entirely in one backend: exact
/// rationals for polynomial identities, complex doubles wherever roots,
/// eigenvalues or flows are needed.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  static Complex zero() { return {0.0, 0.0}; }
  static Complex one() { return {1.0, 0.0}; }
  static double magnitude(const Complex& v) { return std::abs(v); }
  static bool is_zero(const Complex& v, double tol) { return std::abs(v) <= tol; }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static double magnitude(const Rational& v) { return std::abs(v.get_d()); }
  // Tolerance is ignored: rational zero tests are exact.
  static bool is_zero(const Rational& v, double /*tol*/ = 0.0) { return sgn(v) == 0; }
};

/// Zero/one for every commutative ring the division-free kernels run over.
template <class R>
struct RingTraits {
  static R zero() { return ScalarTraits<R>::zero(); }
  static R one() { return ScalarTraits<R>::one(); }
};

inline Complex to_complex(const Rational& q) { return {q.get_d(), 0.0}; }
inline Complex to_complex(const Complex& c) { return c; }

}  // namespace pencil
