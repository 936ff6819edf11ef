#include "pencil/variety.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>

#include "pencil/error.hpp"
#include "pencil/linalg.hpp"

namespace pencil {

namespace {

constexpr int kMaxAttempts = 100;

void check_size(int n, std::size_t got) {
  if (n < 2) throw PencilError(ErrorKind::InvalidConfig, "n must be at least 2");
  if (got != static_cast<std::size_t>(n) + 3) {
    throw PencilError(ErrorKind::InvalidConfig, "mu must have n+3 entries");
  }
}

double max_abs_mu(const PencilConfig& cfg) {
  double m = 0.0;
  for (const Complex& v : cfg.mu) m = std::max(m, std::abs(v));
  return m;
}

/// Last `count` columns of the Householder Q of `cols`: an orthonormal basis of
/// the Hermitian complement of span(cols).
Eigen::MatrixXcd complement_basis(const Eigen::MatrixXcd& cols) {
  const Eigen::Index rows = cols.rows();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(cols);
  const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(rows, rows);
  return q.rightCols(rows - cols.cols());
}

}  // namespace

PencilConfig make_config(int n, std::vector<Complex> mu) {
  check_size(n, mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!std::isfinite(mu[i].real()) || !std::isfinite(mu[i].imag()))
      throw PencilError(ErrorKind::InvalidConfig, "mu not finite");
    for (std::size_t j = i + 1; j < mu.size(); ++j) {
      if (std::abs(mu[i] - mu[j]) <= kMuSeparation) throw PencilError(ErrorKind::InvalidConfig, "mu not distinct");
    }
  }
  return PencilConfig{n, std::move(mu)};
}

ExactPencilConfig make_exact_config(int n, std::vector<Rational> mu) {
  check_size(n, mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    mu[i].canonicalize();
    for (std::size_t j = 0; j < i; ++j) {
      if (mu[i] == mu[j]) throw PencilError(ErrorKind::InvalidConfig, "mu not distinct");
    }
  }
  return ExactPencilConfig{n, std::move(mu)};
}

PencilConfig to_complex(const ExactPencilConfig& cfg) {
  std::vector<Complex> mu;
  for (const Rational& q : cfg.mu) mu.push_back(to_complex(q));
  return make_config(cfg.n, std::move(mu));
}

PencilConfig integer_config(int n) {
  std::vector<Complex> mu;
  for (int i = 0; i < n + 3; ++i) mu.emplace_back(static_cast<double>(i), 0.0);
  return make_config(n, std::move(mu));
}

PencilConfig random_config(int n, Rng& rng) {
  check_size(n, static_cast<std::size_t>(n) + 3);
  std::vector<Complex> mu;
  while (mu.size() < static_cast<std::size_t>(n) + 3) {
    const Complex c = rng.uniform_complex();
    const bool far = std::all_of(mu.begin(), mu.end(), [&](const Complex& m) { return std::abs(m - c) >= 0.1; });
    if (far) mu.push_back(c);
  }
  return make_config(n, std::move(mu));
}

ExactPencilConfig random_exact_config(int n, Rng& rng) {
  check_size(n, static_cast<std::size_t>(n) + 3);
  std::vector<Rational> mu;
  while (mu.size() < static_cast<std::size_t>(n) + 3) {
    const Rational c = rng.small_rational(12, 5);
    if (std::find(mu.begin(), mu.end(), c) == mu.end()) mu.push_back(c);
  }
  return make_exact_config(n, std::move(mu));
}

MembershipResidual membership_residual(const PencilConfig& cfg, const Eigen::VectorXcd& x) {
  Complex q1 = 0.0;
  Complex q2 = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Complex sq = x(i) * x(i);
    q1 += sq;
    q2 += cfg.mu[static_cast<std::size_t>(i)] * sq;
  }
  const double norm2 = x.squaredNorm();
  MembershipResidual r;
  if (norm2 == 0.0) {
    r.q1 = r.q2 = std::numeric_limits<double>::infinity();
    return r;
  }
  r.q1 = std::abs(q1) / norm2;
  r.q2 = std::abs(q2) / (std::max(max_abs_mu(cfg), 1e-300) * norm2);
  return r;
}

bool on_variety(const PencilConfig& cfg, const Eigen::VectorXcd& x, double tol) {
  if (static_cast<std::size_t>(x.size()) != cfg.ambient_dim()) return false;
  const MembershipResidual r = membership_residual(cfg, x);
  return r.q1 <= tol && r.q2 <= tol;
}

AmbientPoint make_point(const PencilConfig& cfg, Eigen::VectorXcd x) {
  if (static_cast<std::size_t>(x.size()) != cfg.ambient_dim())
    throw PencilError(ErrorKind::InvalidPoint, "point has wrong ambient dimension");
  if (!on_variety(cfg, x)) throw PencilError(ErrorKind::InvalidPoint, "point is not on X");
  return AmbientPoint{std::move(x)};
}

AmbientPoint point_from_tail(const PencilConfig& cfg, const Eigen::VectorXcd& tail) {
  const std::size_t dim = cfg.ambient_dim();
  if (static_cast<std::size_t>(tail.size()) != dim - 2)
    throw PencilError(ErrorKind::SizeMismatch, "tail must have n+1 entries");
  Complex r1 = 0.0;
  Complex r2 = 0.0;
  for (Eigen::Index k = 0; k < tail.size(); ++k) {
    const Complex sq = tail(k) * tail(k);
    r1 -= sq;
    r2 -= cfg.mu[static_cast<std::size_t>(k) + 2] * sq;
  }
  // [1 1; mu0 mu1] (x0^2, x1^2)^T = (r1, r2)^T
  const Complex mu0 = cfg.mu[0];
  const Complex mu1 = cfg.mu[1];
  const Complex x1sq = (r2 - mu0 * r1) / (mu1 - mu0);
  const Complex x0sq = r1 - x1sq;
  const double scale = std::max(1.0, tail.squaredNorm());
  if (std::abs(x0sq) <= 1e-9 * scale || std::abs(x1sq) <= 1e-9 * scale)
    throw PencilError(ErrorKind::Unlucky, "x0 or x1 vanishes");
  Eigen::VectorXcd x(static_cast<Eigen::Index>(dim));
  x(0) = std::sqrt(x0sq);
  x(1) = std::sqrt(x1sq);
  x.tail(tail.size()) = tail;
  return AmbientPoint{std::move(x)};
}

AmbientPoint sample_point(const PencilConfig& cfg, Rng& rng) {
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Eigen::VectorXcd tail(static_cast<Eigen::Index>(cfg.ambient_dim() - 2));
    for (Eigen::Index k = 0; k < tail.size(); ++k) tail(k) = rng.uniform_complex();
    try {
      return point_from_tail(cfg, tail);
    } catch (const PencilError& e) {
      if (e.kind() != ErrorKind::Unlucky) throw;
    }
  }
  throw PencilError(ErrorKind::Unlucky, "no usable tail after repeated draws");
}

Eigen::VectorXcd gradient_q1(const Eigen::VectorXcd& x) { return 2.0 * x; }

Eigen::VectorXcd gradient_q2(const PencilConfig& cfg, const Eigen::VectorXcd& x) {
  Eigen::VectorXcd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) g(i) = 2.0 * cfg.mu[static_cast<std::size_t>(i)] * x(i);
  return g;
}

CotangentSample make_cotangent(const PencilConfig& cfg, const AmbientPoint& point, Eigen::VectorXcd xi) {
  if (static_cast<std::size_t>(xi.size()) != cfg.ambient_dim())
    throw PencilError(ErrorKind::InvalidPoint, "covector has wrong ambient dimension");
  const Complex euler = point.x.transpose() * xi;
  if (std::abs(euler) > 1e-9 * point.x.norm() * xi.norm())
    throw PencilError(ErrorKind::InvalidPoint, "covector is not Euler-orthogonal");
  return CotangentSample{point, std::move(xi)};
}

TangentFrame tangent_frame(const PencilConfig& cfg, const AmbientPoint& point) {
  const Eigen::Index dim = point.x.size();
  Eigen::MatrixXcd cols(dim, 3);
  cols.col(0) = point.x;
  cols.col(1) = gradient_q1(point.x).conjugate();
  cols.col(2) = gradient_q2(cfg, point.x).conjugate();
  if (numeric_rank(cols, 1e-10) < 3) throw PencilError(ErrorKind::SingularPoint, "x, dq1, dq2 are dependent");
  // v orthogonal (Hermitian) to conj(grad q) means grad q^T v = 0.
  return TangentFrame{point, complement_basis(cols)};
}

TangentFrame bilinear_normalized(const TangentFrame& frame) {
  Eigen::MatrixXcd v = frame.vectors;
  for (Eigen::Index a = 0; a < v.cols(); ++a) {
    for (Eigen::Index b = 0; b < a; ++b) {
      const Complex proj = v.col(b).transpose() * v.col(a);
      v.col(a) -= proj * v.col(b);
    }
    const Complex g = v.col(a).transpose() * v.col(a);
    if (std::abs(g) <= 1e-10 * v.col(a).squaredNorm())
      throw PencilError(ErrorKind::SingularPoint, "isotropic pivot in bilinear Gram-Schmidt");
    v.col(a) /= std::sqrt(g);
  }
  return TangentFrame{frame.point, std::move(v)};
}

CotangentSample sample_cotangent(const PencilConfig& cfg, const AmbientPoint& point, Rng& rng) {
  const TangentFrame frame = tangent_frame(cfg, point);
  const double x2 = point.x.squaredNorm();
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Eigen::VectorXcd xi(point.x.size());
    for (Eigen::Index i = 0; i < xi.size(); ++i) xi(i) = rng.uniform_complex();
    const Complex s = point.x.transpose() * xi;
    xi -= (s / x2) * point.x.conjugate();
    if (frame_coordinates(frame, xi).norm() > 1e-6 * xi.norm()) return CotangentSample{point, std::move(xi)};
  }
  throw PencilError(ErrorKind::Unlucky, "covector restriction kept vanishing");
}

CotangentSample sample_cotangent(const PencilConfig& cfg, Rng& rng) {
  return sample_cotangent(cfg, sample_point(cfg, rng), rng);
}

Eigen::VectorXcd member_diagonal(const PencilConfig& cfg, const PencilMember& member) {
  const auto dim = static_cast<Eigen::Index>(cfg.ambient_dim());
  Eigen::VectorXcd d(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Complex mu = cfg.mu[static_cast<std::size_t>(i)];
    switch (member.kind) {
      case PencilMember::Kind::Q1: d(i) = 1.0; break;
      case PencilMember::Kind::Q2: d(i) = mu; break;
      case PencilMember::Kind::At: d(i) = member.t - mu; break;
    }
  }
  return d;
}

ComplexSym hessian_matrix(const PencilConfig& cfg, const TangentFrame& frame, const PencilMember& member) {
  const Eigen::VectorXcd d = member_diagonal(cfg, member);
  return symmetric_from_dense(frame.vectors.transpose() * d.asDiagonal() * frame.vectors);
}

Eigen::VectorXcd frame_coordinates(const TangentFrame& frame, const Eigen::VectorXcd& xi) {
  return frame.vectors.transpose() * xi;
}

Eigen::MatrixXcd hyperplane_basis(const Eigen::VectorXcd& xi_coords) {
  if (xi_coords.size() == 0 || xi_coords.norm() == 0.0)
    throw PencilError(ErrorKind::ZeroCovector, "covector restriction is zero");
  return complement_basis(xi_coords.conjugate());
}

ComplexSym restrict_to_hyperplane(const ComplexSym& a, const Eigen::VectorXcd& xi_coords) {
  if (static_cast<std::size_t>(xi_coords.size()) != a.size())
    throw PencilError(ErrorKind::SizeMismatch, "covector and form differ in size");
  return congruence(a, hyperplane_basis(xi_coords));
}

bool rank_bound_check(const PencilConfig& cfg, const AmbientPoint& point, const PencilMember& member) {
  const TangentFrame frame = tangent_frame(cfg, point);
  return numeric_rank(to_dense(hessian_matrix(cfg, frame, member))) >= cfg.n - 1;
}

}  // namespace pencil
