#include "pencil/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace pencil {

namespace {

constexpr double kRootResidualTol = 1e-8;
constexpr double kDiagResidualTol = 1e-8;
constexpr double kSingularATol = 1e-12;
constexpr double kCollisionTol = 1e-8;

double condition_scale(const Poly<Complex>& p, const Complex& r) {
  double s = 0.0;
  double rk = 1.0;
  const double ar = std::abs(r);
  for (const Complex& c : p.coeffs()) {
    s += std::abs(c) * rk;
    rk *= ar;
  }
  return s;
}

}  // namespace

bool lex_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

double root_residual(const Poly<Complex>& p, std::span<const Complex> roots) {
  double worst = 0.0;
  for (const Complex& r : roots) {
    const double scale = condition_scale(p, r);
    const double res = scale > 0.0 ? std::abs(p(r)) / scale : std::abs(p(r));
    worst = std::max(worst, res);
  }
  return worst;
}

std::vector<Complex> poly_roots(const Poly<Complex>& p) {
  const int deg = p.degree();
  if (deg < 1) throw PencilError(ErrorKind::DegreeZero, "polynomial is constant");
  const auto& c = p.coeffs();
  std::vector<Complex> roots;
  if (deg == 1) {
    roots.push_back(-c[0] / c[1]);
  } else {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -c[static_cast<std::size_t>(i)] / c.back();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw PencilError(ErrorKind::NoConverge, "companion eigensolver failed");
    for (int i = 0; i < deg; ++i) roots.push_back(solver.eigenvalues()(i));

    // Newton polish, keeping a step only when it lowers |p|.
    const Poly<Complex> dp = p.derivative();
    for (Complex& r : roots) {
      for (int it = 0; it < 3; ++it) {
        const Complex f = p(r);
        const Complex df = dp(r);
        if (std::abs(df) == 0.0) break;
        const Complex cand = r - f / df;
        if (std::abs(p(cand)) < std::abs(f)) {
          r = cand;
        } else {
          break;
        }
      }
    }
  }
  const double res = root_residual(p, roots);
  if (!(res <= kRootResidualTol)) {
    std::ostringstream os;
    os << "root residual " << res << " exceeds " << kRootResidualTol;
    throw PencilError(ErrorKind::NoConverge, os.str());
  }
  std::sort(roots.begin(), roots.end(), lex_less);
  return roots;
}

SimultaneousDiagonalization simultaneous_diagonalize(const ComplexSym& a, const ComplexSym& b) {
  if (a.size() != b.size()) throw PencilError(ErrorKind::SizeMismatch, "pencil matrices differ in size");
  const auto m = static_cast<Eigen::Index>(a.size());
  SimultaneousDiagonalization out;
  if (m == 0) return out;

  const Eigen::MatrixXcd da = to_dense(a);
  const Eigen::MatrixXcd db = to_dense(b);

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(da);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0 || sv(m - 1) / sv(0) <= kSingularATol) {
    throw PencilError(ErrorKind::SingularA, "A is numerically singular");
  }

  // B v = lambda A v  <=>  (A^{-1} B) v = lambda v
  const Eigen::MatrixXcd pencil_op = da.partialPivLu().solve(db);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(pencil_op, true);
  if (eig.info() != Eigen::Success) throw PencilError(ErrorKind::NoConverge, "generalized eigensolver failed");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) order[static_cast<std::size_t>(i)] = i;
  const auto& ev = eig.eigenvalues();
  std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return lex_less(ev(i), ev(j)); });

  double lam_scale = 1.0;
  for (Eigen::Index i = 0; i < m; ++i) lam_scale = std::max(lam_scale, std::abs(ev(i)));
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      if (std::abs(ev(i) - ev(j)) <= kCollisionTol * lam_scale) {
        throw PencilError(ErrorKind::DegeneratePencil, "roots of det(tA - B) collide");
      }
    }
  }

  out.frame.resize(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    Eigen::VectorXcd v = eig.eigenvectors().col(src);
    const Complex g = (v.transpose() * da * v)(0, 0);
    if (std::abs(g) <= 1e-14 * v.squaredNorm() * sv(0)) {
      throw PencilError(ErrorKind::DegeneratePencil, "isotropic eigenvector");
    }
    out.frame.col(k) = v / std::sqrt(g);
    out.lambdas.push_back(ev(src));
  }

  const Eigen::MatrixXcd ga = out.frame.transpose() * da * out.frame;
  const Eigen::MatrixXcd gb = out.frame.transpose() * db * out.frame;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const Complex ta = (i == j) ? Complex(1.0) : Complex(0.0);
      const Complex tb = (i == j) ? out.lambdas[static_cast<std::size_t>(i)] : Complex(0.0);
      out.residual_a = std::max(out.residual_a, std::abs(ga(i, j) - ta));
      out.residual_b = std::max(out.residual_b, std::abs(gb(i, j) - tb));
    }
  }
  if (!(out.residual_a <= kDiagResidualTol && out.residual_b <= kDiagResidualTol)) {
    std::ostringstream os;
    os << "reconstruction residuals " << out.residual_a << ", " << out.residual_b;
    throw PencilError(ErrorKind::DegeneratePencil, os.str());
  }
  return out;
}

int numeric_rank(const Eigen::MatrixXcd& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) / sv(0) > rel_tol) ++rank;
  }
  return rank;
}

MultisetMatch match_multisets(std::span<const Complex> a, std::span<const Complex> b, double tol) {
  MultisetMatch out;
  out.same_size = a.size() == b.size();
  if (!out.same_size) {
    out.max_distance = std::numeric_limits<double>::infinity();
    return out;
  }
  std::vector<Complex> sa(a.begin(), a.end());
  std::vector<Complex> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end(), lex_less);
  std::sort(sb.begin(), sb.end(), lex_less);
  std::vector<bool> used(sb.size(), false);
  for (const Complex& x : sa) {
    std::size_t best = sb.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < sb.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - sb[j]) / std::max({1.0, std::abs(x), std::abs(sb[j])});
      // sb is sorted, so a strict comparison keeps the lexicographically smaller candidate on ties
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    used[best] = true;
    out.max_distance = std::max(out.max_distance, best_d);
  }
  out.within_tolerance = out.max_distance <= tol;
  return out;
}

}  // namespace pencil
