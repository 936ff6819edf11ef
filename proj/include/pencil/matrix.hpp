#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pencil/error.hpp"
#include "pencil/scalar.hpp"

namespace pencil {

/// Symmetric matrix in packed upper-triangular storage: (i, j) and (j, i)
/// address the same slot, so symmetry holds by construction.
template <class S>
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), data_(n * (n + 1) / 2, ScalarTraits<S>::zero()) {}

  static SymMatrix identity(std::size_t n) {
    SymMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = ScalarTraits<S>::one();
    return m;
  }

  static SymMatrix diagonal(std::span<const S> d) {
    SymMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t size() const { return n_; }

  S& operator()(std::size_t i, std::size_t j) { return data_[slot(i, j)]; }
  const S& operator()(std::size_t i, std::size_t j) const { return data_[slot(i, j)]; }

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
    check_same(a, b);
    SymMatrix r(a.n_);
    for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] = a.data_[k] + b.data_[k];
    return r;
  }

  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    check_same(a, b);
    SymMatrix r(a.n_);
    for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] = a.data_[k] - b.data_[k];
    return r;
  }

  friend SymMatrix operator*(const S& c, const SymMatrix& a) {
    SymMatrix r(a.n_);
    for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] = c * a.data_[k];
    return r;
  }

  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.n_ == b.n_ && a.data_ == b.data_;
  }

 private:
  std::size_t slot(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    // row-major packed upper triangle
    return i * n_ - i * (i - 1) / 2 + (j - i);
  }

  static void check_same(const SymMatrix& a, const SymMatrix& b) {
    if (a.n_ != b.n_) throw PencilError(ErrorKind::SizeMismatch, "symmetric matrix sizes differ");
  }

  std::size_t n_ = 0;
  std::vector<S> data_;
};

using ComplexSym = SymMatrix<Complex>;
using RationalSym = SymMatrix<Rational>;

Eigen::MatrixXcd to_dense(const ComplexSym& m);

/// Symmetric part (M + M^T) / 2 of a square dense matrix.
ComplexSym symmetric_from_dense(const Eigen::MatrixXcd& m);

/// V^T M V for a symmetric M (bilinear congruence, no conjugation).
ComplexSym congruence(const ComplexSym& m, const Eigen::MatrixXcd& v);

/// Dense square matrix over an arbitrary commutative ring, used for the
/// division-free determinant and adjugate (polynomial entries included).
template <class R>
class SquareGrid {
 public:
  SquareGrid() = default;
  explicit SquareGrid(std::size_t m) : m_(m), a_(m * m, RingTraits<R>::zero()) {}

  std::size_t size() const { return m_; }
  R& operator()(std::size_t i, std::size_t j) { return a_[i * m_ + j]; }
  const R& operator()(std::size_t i, std::size_t j) const { return a_[i * m_ + j]; }

 private:
  std::size_t m_ = 0;
  std::vector<R> a_;
};

template <class S>
SquareGrid<S> to_grid(const SymMatrix<S>& m) {
  SquareGrid<S> g(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) g(i, j) = m(i, j);
  return g;
}

}  // namespace pencil
