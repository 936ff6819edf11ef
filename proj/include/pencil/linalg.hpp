#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pencil/matrix.hpp"
#include "pencil/poly.hpp"
#include "pencil/scalar.hpp"

namespace pencil {

// ---------------------------------------------------------------------------
// Division-free determinant and adjugate.
//
// Laplace expansion along rows with memoisation over the set of columns
// already consumed: O(m 2^m) ring operations. Works over any commutative ring
// with RingTraits (rationals, complex doubles, polynomials).
// ---------------------------------------------------------------------------

template <class R>
R determinant(const SquareGrid<R>& g) {
  const std::size_t m = g.size();
  if (m == 0) return RingTraits<R>::one();
  const std::uint32_t full = (std::uint32_t{1} << m) - 1;
  // minor[mask]: determinant of rows popcount(mask).. against the columns not in mask
  std::vector<R> minor(std::size_t{full} + 1, RingTraits<R>::zero());
  minor[full] = RingTraits<R>::one();
  for (std::uint32_t mask = full; mask-- > 0;) {
    const std::size_t row = static_cast<std::size_t>(std::popcount(mask));
    R acc = RingTraits<R>::zero();
    int parity = 0;
    for (std::size_t c = 0; c < m; ++c) {
      const std::uint32_t bit = std::uint32_t{1} << c;
      if (mask & bit) continue;
      R term = g(row, c) * minor[mask | bit];
      if (parity % 2 == 0)
        acc = acc + term;
      else
        acc = acc - term;
      ++parity;
    }
    minor[mask] = acc;
  }
  return minor[0];
}

template <class S>
S determinant(const SymMatrix<S>& m) {
  return determinant(to_grid(m));
}

/// adj(M)(i, j) = (-1)^{i+j} det(M without row j and column i).
template <class R>
SquareGrid<R> adjugate(const SquareGrid<R>& g) {
  const std::size_t m = g.size();
  SquareGrid<R> adj(m);
  if (m == 0) return adj;
  if (m == 1) {
    adj(0, 0) = RingTraits<R>::one();
    return adj;
  }
  SquareGrid<R> sub(m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t r = 0, rr = 0; r < m; ++r) {
        if (r == j) continue;
        for (std::size_t c = 0, cc = 0; c < m; ++c) {
          if (c == i) continue;
          sub(rr, cc) = g(r, c);
          ++cc;
        }
        ++rr;
      }
      R d = determinant(sub);
      adj(i, j) = ((i + j) % 2 == 0) ? d : RingTraits<R>::zero() - d;
    }
  }
  return adj;
}

/// Adjugate of a symmetric matrix; the result is symmetric.
template <class S>
SymMatrix<S> adjugate(const SymMatrix<S>& m) {
  const SquareGrid<S> full = adjugate(to_grid(m));
  SymMatrix<S> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i; j < m.size(); ++j) out(i, j) = full(i, j);
  return out;
}

/// det(t A - B) as a polynomial in t.
template <class S>
Poly<S> pencil_det_poly(const SymMatrix<S>& a, const SymMatrix<S>& b) {
  if (a.size() != b.size()) throw PencilError(ErrorKind::SizeMismatch, "pencil matrices differ in size");
  const std::size_t m = a.size();
  SquareGrid<Poly<S>> g(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      S neg_b = -b(i, j);
      g(i, j) = Poly<S>(std::vector<S>{neg_b, a(i, j)});
    }
  }
  return determinant(g);
}

// ---------------------------------------------------------------------------
// Float-backend kernels.
// ---------------------------------------------------------------------------

/// Relative residual max_i |p(r_i)| / sum_k |c_k| |r_i|^k.
double root_residual(const Poly<Complex>& p, std::span<const Complex> roots);

/// All deg(p) complex roots (companion eigenvalues, Newton-polished).
/// Throws DegreeZero for constants and NoConverge when the relative residual
/// exceeds 1e-8.
std::vector<Complex> poly_roots(const Poly<Complex>& p);

struct SimultaneousDiagonalization {
  std::vector<Complex> lambdas;  ///< sorted lexicographically by (re, im)
  Eigen::MatrixXcd frame;        ///< G with G^T A G = I, G^T B G = diag(lambdas)
  double residual_a = 0.0;       ///< max |G^T A G - I|
  double residual_b = 0.0;       ///< max |G^T B G - diag(lambdas)|
};

/// Simultaneous diagonalisation of a complex-symmetric pencil by bilinear
/// congruence. Throws SingularA when A is numerically singular and
/// DegeneratePencil when the roots of det(tA - B) collide or the
/// reconstruction residuals exceed 1e-8.
SimultaneousDiagonalization simultaneous_diagonalize(const ComplexSym& a, const ComplexSym& b);

/// Number of singular values with sigma_k / sigma_1 > rel_tol.
int numeric_rank(const Eigen::MatrixXcd& m, double rel_tol = 1e-8);

struct MultisetMatch {
  double max_distance = 0.0;  ///< largest matched distance |a-b| / max(1, |a|, |b|)
  bool within_tolerance = false;
  bool same_size = false;
};

/// Greedy nearest-neighbour matching of two complex multisets. Elements of
/// `a` are visited in lexicographic (re, im) order; ties between candidates
/// go to the lexicographically smaller one.
MultisetMatch match_multisets(std::span<const Complex> a, std::span<const Complex> b, double tol = 1e-6);

/// Lexicographic (re, im) order on complex numbers.
bool lex_less(const Complex& a, const Complex& b);

}  // namespace pencil
