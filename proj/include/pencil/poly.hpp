#pragma once

#include <algorithm>
#include <span>
#include <utility>
#include <vector>

#include "pencil/scalar.hpp"

namespace pencil {

/// Univariate polynomial, coefficients stored lowest degree first.
///
/// Exact trailing zeros are always stripped, so the zero polynomial has an
/// empty coefficient list and degree -1. For the float backend a
/// tolerance-based trim is available through normalized().
template <class S>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<S> coeffs) : coeffs_(std::move(coeffs)) { strip(); }

  static Poly constant(const S& c) { return Poly(std::vector<S>{c}); }

  /// c * t^k
  static Poly monomial(const S& c, std::size_t k) {
    std::vector<S> v(k + 1, ScalarTraits<S>::zero());
    v[k] = c;
    return Poly(std::move(v));
  }

  /// prod (t - r_i)
  static Poly from_roots(std::span<const S> roots) {
    Poly p = constant(ScalarTraits<S>::one());
    for (const S& r : roots) {
      S neg = -r;
      p = p * Poly(std::vector<S>{neg, ScalarTraits<S>::one()});
    }
    return p;
  }

  const std::vector<S>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }

  S coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : ScalarTraits<S>::zero(); }
  S leading() const { return coeffs_.empty() ? ScalarTraits<S>::zero() : coeffs_.back(); }

  S operator()(const S& t) const {
    S acc = ScalarTraits<S>::zero();
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      acc = acc * t + *it;
    }
    return acc;
  }

  /// Largest coefficient magnitude.
  double scale() const {
    double s = 0.0;
    for (const S& c : coeffs_) s = std::max(s, ScalarTraits<S>::magnitude(c));
    return s;
  }

  /// Drops leading coefficients with |c| <= rel_tol * scale().
  Poly normalized(double rel_tol) const {
    const double cut = rel_tol * scale();
    std::vector<S> v = coeffs_;
    while (!v.empty() && ScalarTraits<S>::is_zero(v.back(), cut)) v.pop_back();
    return Poly(std::move(v));
  }

  Poly derivative() const {
    if (coeffs_.size() <= 1) return Poly();
    std::vector<S> v(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) v[k - 1] = coeffs_[k] * S(static_cast<double>(k));
    return Poly(std::move(v));
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<S> v(std::max(a.coeffs_.size(), b.coeffs_.size()), ScalarTraits<S>::zero());
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) v[k] = v[k] + a.coeffs_[k];
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) v[k] = v[k] + b.coeffs_[k];
    return Poly(std::move(v));
  }

  friend Poly operator-(const Poly& a) {
    std::vector<S> v(a.coeffs_.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = -a.coeffs_[k];
    return Poly(std::move(v));
  }

  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<S> v(a.coeffs_.size() + b.coeffs_.size() - 1, ScalarTraits<S>::zero());
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
        v[i + j] = v[i + j] + a.coeffs_[i] * b.coeffs_[j];
      }
    }
    return Poly(std::move(v));
  }

  friend Poly operator*(const S& c, const Poly& a) {
    std::vector<S> v(a.coeffs_.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = c * a.coeffs_[k];
    return Poly(std::move(v));
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void strip() {
    while (!coeffs_.empty() && ScalarTraits<S>::is_zero(coeffs_.back(), 0.0)) coeffs_.pop_back();
  }

  std::vector<S> coeffs_;
};

template <class S>
struct RingTraits<Poly<S>> {
  static Poly<S> zero() { return Poly<S>(); }
  static Poly<S> one() { return Poly<S>::constant(ScalarTraits<S>::one()); }
};

}  // namespace pencil
