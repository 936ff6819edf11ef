#include "pencil/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "pencil/linalg.hpp"

namespace pencil {

namespace {

constexpr double kZeroRestrictionTol = 1e-12;
constexpr double kIncidenceRankTol = 1e-8;

void check_sample(const PencilConfig& cfg, const CotangentSample& sample) {
  const auto dim = static_cast<Eigen::Index>(cfg.ambient_dim());
  if (sample.point.x.size() != dim || sample.xi.size() != dim)
    throw PencilError(ErrorKind::SizeMismatch, "sample does not match the configuration");
}

Eigen::VectorXcd checked_frame_coordinates(const TangentFrame& frame, const CotangentSample& sample) {
  Eigen::VectorXcd coords = frame_coordinates(frame, sample.xi);
  const double ref = std::max(sample.xi.norm(), 1e-300);
  if (coords.norm() <= kZeroRestrictionTol * ref)
    throw PencilError(ErrorKind::ZeroRestriction, "covector vanishes on the tangent space");
  return coords;
}

std::vector<Complex> roots_of_exact_degree(const Poly<Complex>& p, int expected) {
  const double scale = p.scale();
  if (p.degree() < expected || std::abs(p.coeff(expected)) <= kDegreeDropTol * scale) {
    throw PencilError(ErrorKind::DegenerateDrop, "degree drops below n-1");
  }
  if (expected == 0) return {};
  return poly_roots(p);
}

Eigen::VectorXcd padded_coeffs(const Poly<Complex>& p, int size) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(size);
  for (int k = 0; k <= std::min(p.degree(), size - 1); ++k) v(k) = p.coeff(k);
  return v;
}

// Orthonormal basis of the right kernel of m, assuming its dimension is `dim`.
Eigen::MatrixXcd kernel_basis(const Eigen::MatrixXcd& m, Eigen::Index dim) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(dim);
}

}  // namespace

Eigen::VectorXcd phi_s(const PencilConfig& cfg, const CotangentSample& sample) {
  check_sample(cfg, sample);
  const std::size_t dim = cfg.ambient_dim();
  const std::vector<Complex> x(sample.point.x.data(), sample.point.x.data() + dim);
  const std::vector<Complex> xi(sample.xi.data(), sample.xi.data() + dim);
  Eigen::VectorXcd out(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    const ComplexSym m = s_matrix<Complex>(std::span<const Complex>(cfg.mu), i, std::span<const Complex>(x));
    out(static_cast<Eigen::Index>(i)) = quadratic_form(m, std::span<const Complex>(xi));
  }
  return out;
}

Complex frame_volume(const PencilConfig& cfg, const TangentFrame& frame) {
  const Eigen::VectorXcd& x = frame.point.x;
  const Eigen::Index dim = x.size();
  Eigen::MatrixXcd g(2, dim);
  g.row(0) = gradient_q1(x).transpose();
  g.row(1) = gradient_q2(cfg, x).transpose();
  const Eigen::MatrixXcd gh = g.adjoint();
  const Eigen::MatrixXcd u = gh * (g * gh).inverse();
  Eigen::MatrixXcd full(dim, dim);
  full.col(0) = x;
  full.middleCols(1, frame.vectors.cols()) = frame.vectors;
  full.rightCols(2) = u;
  return full.determinant();
}

Poly<Complex> psi_poly(const PencilConfig& cfg, const TangentFrame& frame, const CotangentSample& sample) {
  check_sample(cfg, sample);
  const Eigen::VectorXcd xh = checked_frame_coordinates(frame, sample);
  const ComplexSym a = hessian_matrix(cfg, frame, PencilMember::q1());
  const ComplexSym b = hessian_matrix(cfg, frame, PencilMember::q2());
  const std::size_t m = a.size();
  SquareGrid<Poly<Complex>> g(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) g(i, j) = Poly<Complex>(std::vector<Complex>{-b(i, j), a(i, j)});
  const SquareGrid<Poly<Complex>> adj = adjugate(g);
  Poly<Complex> psi;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      psi = psi + (xh(static_cast<Eigen::Index>(i)) * xh(static_cast<Eigen::Index>(j))) * adj(i, j);
  return psi;
}

Poly<Complex> psi_poly_normalized(const PencilConfig& cfg, const TangentFrame& frame,
                                  const CotangentSample& sample) {
  const Poly<Complex> raw = psi_poly(cfg, frame, sample);
  const Complex vol = frame_volume(cfg, frame);
  if (std::abs(vol) == 0.0) throw PencilError(ErrorKind::SingularPoint, "frame volume vanishes");
  return (Complex(1.0) / (vol * vol)) * raw;
}

std::vector<Complex> fiber_roots(const PencilConfig& cfg, const TangentFrame& frame, const CotangentSample& sample) {
  return roots_of_exact_degree(psi_poly_normalized(cfg, frame, sample), cfg.n - 1);
}

std::vector<Complex> singular_members(const PencilConfig& cfg, const TangentFrame& frame,
                                      const CotangentSample& sample) {
  check_sample(cfg, sample);
  const Eigen::VectorXcd xh = checked_frame_coordinates(frame, sample);
  const ComplexSym a = restrict_to_hyperplane(hessian_matrix(cfg, frame, PencilMember::q1()), xh);
  const ComplexSym b = restrict_to_hyperplane(hessian_matrix(cfg, frame, PencilMember::q2()), xh);
  return roots_of_exact_degree(pencil_det_poly(a, b), cfg.n - 1);
}

SpectralValue spectral_value(const PencilConfig& cfg, const CotangentSample& sample) {
  const TangentFrame frame = tangent_frame(cfg, sample.point);
  SpectralValue out;
  out.psi = psi_poly_normalized(cfg, frame, sample);
  out.s = phi_s(cfg, sample);
  out.roots = roots_of_exact_degree(out.psi, cfg.n - 1);
  return out;
}

Eigen::VectorXcd apply_map(const SToPsiMap& map, const Eigen::VectorXcd& s_values) {
  Eigen::VectorXcd sel(static_cast<Eigen::Index>(map.indices.size()));
  for (std::size_t k = 0; k < map.indices.size(); ++k)
    sel(static_cast<Eigen::Index>(k)) = s_values(static_cast<Eigen::Index>(map.indices[k]));
  return map.L * sel;
}

SToPsiMap s_to_psi_map(const PencilConfig& cfg, std::span<const CotangentSample> training,
                       std::span<const CotangentSample> holdout, std::vector<std::size_t> indices) {
  const int n = cfg.n;
  if (indices.empty()) {
    indices.resize(static_cast<std::size_t>(n));
    std::iota(indices.begin(), indices.end(), std::size_t{0});
  }
  if (indices.size() != static_cast<std::size_t>(n))
    throw PencilError(ErrorKind::SizeMismatch, "need exactly n basis indices");
  for (std::size_t idx : indices)
    if (idx >= cfg.ambient_dim()) throw PencilError(ErrorKind::DomainError, "basis index out of range");
  if (training.size() < 4 * static_cast<std::size_t>(n) || holdout.size() < static_cast<std::size_t>(n))
    throw PencilError(ErrorKind::DomainError, "not enough samples to fit the encoding map");

  SToPsiMap map;
  map.indices = indices;
  map.L = Eigen::MatrixXcd::Identity(n, n);

  auto encode = [&](const CotangentSample& sample, Eigen::VectorXcd& s_sel, Eigen::VectorXcd& psi) {
    const TangentFrame frame = tangent_frame(cfg, sample.point);
    psi = padded_coeffs(psi_poly_normalized(cfg, frame, sample), n);
    const Eigen::VectorXcd s = phi_s(cfg, sample);
    s_sel.resize(n);
    for (int k = 0; k < n; ++k) s_sel(k) = s(static_cast<Eigen::Index>(indices[static_cast<std::size_t>(k)]));
  };

  const auto rows = static_cast<Eigen::Index>(training.size());
  Eigen::MatrixXcd sm(rows, n);
  Eigen::MatrixXcd pm(rows, n);
  for (Eigen::Index r = 0; r < rows; ++r) {
    Eigen::VectorXcd s_sel, psi;
    encode(training[static_cast<std::size_t>(r)], s_sel, psi);
    // each sample is homogeneous of degree 2 in xi; weight rows to unit size
    const double w = 1.0 / std::max(s_sel.norm(), 1e-300);
    sm.row(r) = w * s_sel.transpose();
    pm.row(r) = w * psi.transpose();
  }
  const Eigen::MatrixXcd lt = sm.completeOrthogonalDecomposition().solve(pm);
  map.L = lt.transpose();
  map.training_residual = (sm * lt - pm).norm() / std::max(pm.norm(), 1e-300);

  for (const CotangentSample& sample : holdout) {
    Eigen::VectorXcd s_sel, psi;
    encode(sample, s_sel, psi);
    const double rel = (map.L * s_sel - psi).norm() / std::max(psi.norm(), 1e-300);
    map.holdout_residual = std::max(map.holdout_residual, rel);
  }
  if (!(map.holdout_residual <= kGaugeTol)) {
    std::ostringstream os;
    os << "holdout residual " << map.holdout_residual << " exceeds " << kGaugeTol;
    throw PencilError(ErrorKind::GaugeError, os.str());
  }
  return map;
}

PlaneLift plane_lift(const PencilConfig& cfg, const TangentFrame& frame, const CotangentSample& sample) {
  check_sample(cfg, sample);
  const Eigen::VectorXcd xh = checked_frame_coordinates(frame, sample);
  const Eigen::MatrixXcd nb = hyperplane_basis(xh);
  const ComplexSym a = congruence(hessian_matrix(cfg, frame, PencilMember::q1()), nb);
  const ComplexSym b = congruence(hessian_matrix(cfg, frame, PencilMember::q2()), nb);
  const SimultaneousDiagonalization diag = simultaneous_diagonalize(Complex(-1.0) * a, Complex(-1.0) * b);

  const int n = cfg.n;
  const auto dim = static_cast<Eigen::Index>(cfg.ambient_dim());
  PlaneLift lift;
  lift.lambdas = diag.lambdas;
  lift.alpha = diag.frame.inverse();
  lift.plane_basis = Eigen::MatrixXcd::Zero(dim + n - 1, n);
  lift.plane_basis.col(0).head(dim) = sample.point.x;
  const Eigen::MatrixXcd h = frame.vectors * nb;  // ambient lifts of the H basis
  for (int c = 0; c < n - 1; ++c) {
    lift.plane_basis.col(c + 1).head(dim) = h.col(c);
    lift.plane_basis.col(c + 1).tail(n - 1) = lift.alpha.col(c);
  }
  return lift;
}

PlaneResiduals plane_gram_residuals(const PencilConfig& cfg, const PlaneLift& lift) {
  const auto dim = static_cast<Eigen::Index>(cfg.ambient_dim());
  const Eigen::Index m = lift.plane_basis.rows();
  Eigen::VectorXcd d1 = Eigen::VectorXcd::Ones(m);
  Eigen::VectorXcd d2(m);
  for (Eigen::Index i = 0; i < dim; ++i) d2(i) = cfg.mu[static_cast<std::size_t>(i)];
  for (Eigen::Index i = dim; i < m; ++i) d2(i) = lift.lambdas[static_cast<std::size_t>(i - dim)];

  double col_scale = 0.0;
  for (Eigen::Index c = 0; c < lift.plane_basis.cols(); ++c)
    col_scale = std::max(col_scale, lift.plane_basis.col(c).squaredNorm());
  col_scale = std::max(col_scale, 1e-300);

  const Eigen::MatrixXcd& p = lift.plane_basis;
  PlaneResiduals out;
  out.q1 = (p.transpose() * d1.asDiagonal() * p).cwiseAbs().maxCoeff() / col_scale;
  out.q2 = (p.transpose() * d2.asDiagonal() * p).cwiseAbs().maxCoeff() / col_scale;
  return out;
}

PlaneLift flip_alpha_sign(const PlaneLift& lift, std::size_t i) {
  const Eigen::Index k = static_cast<Eigen::Index>(i);
  if (k >= lift.alpha.rows()) throw PencilError(ErrorKind::DomainError, "alpha index out of range");
  PlaneLift out = lift;
  out.alpha.row(k) *= -1.0;
  const Eigen::Index y0 = lift.plane_basis.rows() - lift.alpha.rows();
  out.plane_basis.row(y0 + k) *= -1.0;
  return out;
}

PlaneLift permute_lift(const PlaneLift& lift, std::span<const std::size_t> perm) {
  const Eigen::Index m = lift.alpha.rows();
  if (static_cast<Eigen::Index>(perm.size()) != m) throw PencilError(ErrorKind::SizeMismatch, "bad permutation");
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t p : perm) {
    if (p >= perm.size() || seen[p]) throw PencilError(ErrorKind::DomainError, "not a permutation");
    seen[p] = true;
  }
  PlaneLift out = lift;
  const Eigen::Index y0 = lift.plane_basis.rows() - m;
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto src = static_cast<Eigen::Index>(perm[static_cast<std::size_t>(k)]);
    out.lambdas[static_cast<std::size_t>(k)] = lift.lambdas[static_cast<std::size_t>(src)];
    out.alpha.row(k) = lift.alpha.row(src);
    out.plane_basis.row(y0 + k) = lift.plane_basis.row(y0 + src);
  }
  return out;
}

PlaneImage psi_of_plane(const PencilConfig& cfg, const PlaneLift& lift) {
  const auto dim = static_cast<Eigen::Index>(cfg.ambient_dim());
  const Eigen::MatrixXcd& p = lift.plane_basis;
  const Eigen::Index k = p.cols();
  if (p.rows() != dim + k - 1) throw PencilError(ErrorKind::SizeMismatch, "plane basis has wrong shape");
  const Eigen::MatrixXcd xp = p.topRows(dim);
  const Eigen::MatrixXcd yp = p.bottomRows(k - 1);

  // P meets {y = 0} in a single point iff the y-block has full row rank.
  if (k > 1 && numeric_rank(yp, kIncidenceRankTol) != k - 1)
    throw PencilError(ErrorKind::BadIncidence, "plane meets the base space in more than a point");
  if (numeric_rank(xp, kIncidenceRankTol) != k)
    throw PencilError(ErrorKind::BadIncidence, "projected plane is degenerate");

  const Eigen::VectorXcd c = k > 1 ? Eigen::VectorXcd(kernel_basis(yp, 1).col(0)) : Eigen::VectorXcd::Ones(1);
  PlaneImage out;
  out.point.x = xp * c;

  // Left kernel of the projected plane: conormals plus the covector line.
  const Eigen::MatrixXcd ker = kernel_basis(xp.transpose(), dim - k);
  Eigen::MatrixXcd normals(dim, 2);
  normals.col(0) = gradient_q1(out.point.x);
  normals.col(1) = gradient_q2(cfg, out.point.x);
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(normals);
  const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, 2);
  const Eigen::MatrixXcd projected = ker - q * (q.adjoint() * ker);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(projected, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() > 1 && sv(1) > kIncidenceRankTol * sv(0))
    throw PencilError(ErrorKind::BadIncidence, "covector class is not a single line");
  out.xi = svd.matrixU().col(0);
  return out;
}

double projective_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  if (a.size() != b.size()) throw PencilError(ErrorKind::SizeMismatch, "vectors differ in size");
  const double na = a.squaredNorm();
  const double nb = b.squaredNorm();
  if (na == 0.0 || nb == 0.0) throw PencilError(ErrorKind::DomainError, "zero vector has no line");
  // residual of b against the line of a; stabler than sqrt(1 - cos^2) near zero
  const Eigen::VectorXcd r = b - (a.dot(b) / na) * a;
  return std::min(1.0, r.norm() / std::sqrt(nb));
}

CodimStratum codim_stratum(long long k, long long l) {
  if (k < 0 || l < -1) throw PencilError(ErrorKind::DomainError, "codim_stratum needs k >= 0 and l >= -1");
  CodimStratum out;
  out.codim = (k - l) * (k - l - 1) + 2 * (l + 1);
  out.grassmannian_codim = k * (k + 1) + (l + 1) * (l + 4);
  out.corank = (k + 1) * (l + 1);
  return out;
}

}  // namespace pencil
