#include "pencil/matrix.hpp"

namespace pencil {

Eigen::MatrixXcd to_dense(const ComplexSym& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXcd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) d(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return d;
}

ComplexSym symmetric_from_dense(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw PencilError(ErrorKind::SizeMismatch, "matrix is not square");
  const auto n = static_cast<std::size_t>(m.rows());
  ComplexSym s(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      s(i, j) = 0.5 * (m(ii, jj) + m(jj, ii));
    }
  }
  return s;
}

ComplexSym congruence(const ComplexSym& m, const Eigen::MatrixXcd& v) {
  if (static_cast<std::size_t>(v.rows()) != m.size())
    throw PencilError(ErrorKind::SizeMismatch, "congruence: basis has wrong ambient size");
  return symmetric_from_dense(v.transpose() * to_dense(m) * v);
}

}  // namespace pencil
