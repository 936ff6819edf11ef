#include "pencil/tensor_verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "pencil/error.hpp"
#include "pencil/linalg.hpp"
#include "pencil/spectral.hpp"

namespace pencil {

namespace {

std::vector<Rational> random_rationals(std::size_t count, Rng& rng) {
  std::vector<Rational> v(count);
  for (Rational& r : v) r = rng.small_rational();
  return v;
}

Rational s_form(std::span<const Rational> mu, std::size_t i, std::span<const Rational> x, std::span<const Rational> xi) {
  return quadratic_form(s_matrix<Rational>(mu, i, x), xi);
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  Rational acc = 0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

void record(IdentityReport& rep, const Rational& lhs, const Rational& rhs) {
  if (lhs != rhs) {
    ++rep.failures;
    rep.max_residual = std::max(rep.max_residual, std::abs(Rational(lhs - rhs).get_d()));
  }
}

// Point of {sum x^2 = sum mu x^2 = 0} from a random tail (x_2, ..); nullopt
// when x_0 or x_1 comes out numerically zero.
std::optional<Eigen::VectorXcd> point_on_pair(std::span<const Complex> mu, Rng& rng) {
  const auto m = static_cast<Eigen::Index>(mu.size());
  Eigen::VectorXcd x(m);
  Complex s1 = 0.0, s2 = 0.0;
  for (Eigen::Index k = 2; k < m; ++k) {
    x(k) = rng.uniform_complex();
    s1 += x(k) * x(k);
    s2 += mu[static_cast<std::size_t>(k)] * x(k) * x(k);
  }
  // x_0^2 + x_1^2 = -s1, mu_0 x_0^2 + mu_1 x_1^2 = -s2
  const Complex x0sq = (mu[1] * s1 - s2) / (mu[0] - mu[1]);
  const Complex x1sq = (mu[0] * s1 - s2) / (mu[1] - mu[0]);
  const double scale = std::max(1.0, x.tail(m - 2).squaredNorm());
  if (std::abs(x0sq) <= 1e-9 * scale || std::abs(x1sq) <= 1e-9 * scale) return std::nullopt;
  x(0) = std::sqrt(x0sq);
  x(1) = std::sqrt(x1sq);
  return x;
}

Eigen::VectorXcd euler_projected(const Eigen::VectorXcd& z, Eigen::VectorXcd zeta) {
  const Complex euler = (z.transpose() * zeta)(0);
  zeta -= (euler / z.squaredNorm()) * z.conjugate();
  return zeta;
}

double dual_scale(const QuadricConfig& q, const Eigen::VectorXcd& zeta) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < zeta.size(); ++j) s += std::norm(zeta(j)) / std::abs(q.coeffs[static_cast<std::size_t>(j)]);
  return s;
}

Eigen::VectorXcd quadric_gradient(const QuadricConfig& q, const Eigen::VectorXcd& z) {
  Eigen::VectorXcd g(z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) g(j) = 2.0 * q.coeffs[static_cast<std::size_t>(j)] * z(j);
  return g;
}

ComplexSym quadric_frame_hessian(const QuadricConfig& q, const Eigen::MatrixXcd& frame) {
  Eigen::VectorXcd a(static_cast<Eigen::Index>(q.coeffs.size()));
  for (Eigen::Index j = 0; j < a.size(); ++j) a(j) = q.coeffs[static_cast<std::size_t>(j)];
  return symmetric_from_dense(frame.transpose() * a.asDiagonal() * frame);
}

}  // namespace

bool VerificationReport::passed() const {
  return !identities.empty() &&
         std::all_of(identities.begin(), identities.end(), [](const IdentityReport& r) { return r.passed(); });
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

int dim_W(const PencilConfig& cfg, int num_samples, std::uint64_t seed, Execution exec) {
  if (num_samples < 1) throw PencilError(ErrorKind::DomainError, "need at least one sample");
  const auto samples = sample_batch(cfg, static_cast<std::size_t>(num_samples), seed, exec);
  return numeric_rank(s_value_matrix(cfg, samples, exec), kRankTol);
}

int freeness_rank(const PencilConfig& cfg, int d, const std::vector<std::size_t>& basis, int num_samples,
                  std::uint64_t seed, Execution exec) {
  for (std::size_t i : basis)
    if (i >= cfg.ambient_dim()) throw PencilError(ErrorKind::DomainError, "basis index out of range");
  if (basis.empty()) throw PencilError(ErrorKind::DomainError, "empty basis");
  const auto samples = sample_batch(cfg, static_cast<std::size_t>(num_samples), seed, exec);
  const Eigen::MatrixXcd all = s_value_matrix(cfg, samples, exec);
  Eigen::MatrixXcd chosen(all.rows(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k)
    chosen.col(static_cast<Eigen::Index>(k)) = all.col(static_cast<Eigen::Index>(basis[k]));
  const auto exps = monomial_exponents(static_cast<int>(basis.size()), d);
  return numeric_rank(monomial_matrix(chosen, exps, exec), kRankTol);
}

BasisCheck any_n_basis_check(const PencilConfig& cfg, int num_samples, std::uint64_t seed, int max_exhaustive,
                             int random_subsets) {
  const auto samples = sample_batch(cfg, static_cast<std::size_t>(num_samples), seed);
  const Eigen::MatrixXcd values = s_value_matrix(cfg, samples);
  const int n = cfg.n;
  const int dim = static_cast<int>(cfg.ambient_dim());

  std::vector<std::vector<std::size_t>> subsets;
  if (n <= max_exhaustive) {
    std::vector<bool> pick(static_cast<std::size_t>(dim), false);
    std::fill(pick.begin(), pick.begin() + n, true);
    do {
      std::vector<std::size_t> s;
      for (int i = 0; i < dim; ++i)
        if (pick[static_cast<std::size_t>(i)]) s.push_back(static_cast<std::size_t>(i));
      subsets.push_back(s);
    } while (std::prev_permutation(pick.begin(), pick.end()));
  } else {
    Rng rng(derive_seed(seed, 0xB5));
    std::set<std::vector<std::size_t>> seen;
    const auto total = binomial(dim, n);
    while (static_cast<int>(seen.size()) < std::min<long long>(random_subsets, total)) {
      std::vector<std::size_t> all(static_cast<std::size_t>(dim));
      std::iota(all.begin(), all.end(), std::size_t{0});
      for (int i = 0; i < n; ++i) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(i, dim - 1));
        std::swap(all[static_cast<std::size_t>(i)], all[j]);
      }
      std::vector<std::size_t> s(all.begin(), all.begin() + n);
      std::sort(s.begin(), s.end());
      if (seen.insert(s).second) subsets.push_back(s);
    }
  }

  BasisCheck out;
  for (const auto& s : subsets) {
    Eigen::MatrixXcd cols(values.rows(), n);
    for (int k = 0; k < n; ++k) cols.col(k) = values.col(static_cast<Eigen::Index>(s[static_cast<std::size_t>(k)]));
    ++out.subsets_checked;
    if (numeric_rank(cols, kRankTol) != n) {
      out.passed = false;
      out.failures.push_back(s);
    }
  }
  return out;
}

VerificationReport restriction_identity_check(const ExactPencilConfig& cfg, Rng& rng, int draws) {
  VerificationReport rep{"restriction", {{"h2_s0_vanishes"}, {"h2_si_equals_reduced_si"}}};
  const std::size_t dim = cfg.ambient_dim();
  const std::vector<Rational> reduced(cfg.mu.begin() + 1, cfg.mu.end());
  for (int d = 0; d < draws; ++d) {
    std::vector<Rational> x = random_rationals(dim, rng), xi = random_rationals(dim, rng);
    x[0] = 0;
    xi[0] = 0;
    const std::span<const Rational> xt(x.data() + 1, dim - 1), xit(xi.data() + 1, dim - 1);
    ++rep.identities[0].draws;
    record(rep.identities[0], s_form(cfg.mu, 0, x, xi), Rational(0));
    ++rep.identities[1].draws;
    for (std::size_t i = 1; i < dim; ++i)
      record(rep.identities[1], s_form(cfg.mu, i, x, xi), s_form(reduced, i - 1, xt, xit));
  }
  return rep;
}

VerificationReport bilinear_defect_identity_check(const ExactPencilConfig& cfg, Rng& rng, int draws) {
  VerificationReport rep{"bilinear_defect", {{"linear_in_grad_q2"}, {"quadratic_in_grad_q2"}, {"linear_in_grad_q1"}}};
  const std::size_t dim = cfg.ambient_dim();
  for (int d = 0; d < draws; ++d) {
    const std::vector<Rational> x = random_rationals(dim, rng), xi = random_rationals(dim, rng);
    std::vector<Rational> g1(dim), g2(dim);
    Rational q1 = 0, q2 = 0;
    for (std::size_t j = 0; j < dim; ++j) {
      g1[j] = 2 * x[j];
      g2[j] = 2 * cfg.mu[j] * x[j];
      q1 += x[j] * x[j];
      q2 += cfg.mu[j] * x[j] * x[j];
    }
    const Rational euler = dot(x, xi);
    for (auto& r : rep.identities) ++r.draws;
    for (std::size_t i = 0; i < dim; ++i) {
      const RationalSym s = s_matrix<Rational>(std::span<const Rational>(cfg.mu), i, std::span<const Rational>(x));
      const std::span<const Rational> vxi(xi), vg1(g1), vg2(g2);
      record(rep.identities[0], 2 * bilinear_form(s, vxi, vg2), 4 * x[i] * x[i] * euler - 4 * x[i] * xi[i] * q1);
      record(rep.identities[1], quadratic_form(s, vg2), 4 * x[i] * x[i] * (q2 - cfg.mu[i] * q1));
      record(rep.identities[2], bilinear_form(s, vxi, vg1), Rational(0));
    }
  }
  return rep;
}

VerificationReport s0_pushforward_identity(const ExactPencilConfig& cfg, Rng& rng, int draws) {
  VerificationReport rep{"s0_pushforward", {{"s0_on_vertical_covectors"}, {"vanishes_at_x0_zero"}}};
  const std::size_t dim = cfg.ambient_dim();
  auto both_sides = [&](const std::vector<Rational>& x, const std::vector<Rational>& eta) {
    std::vector<Rational> xi = eta;
    xi[0] = 0;
    Rational rhs = 0;
    for (std::size_t j = 1; j < dim; ++j) rhs += eta[j] * eta[j] / (cfg.mu[j] - cfg.mu[0]);
    rhs *= x[0] * x[0];
    return std::pair<Rational, Rational>(s_form(cfg.mu, 0, x, xi), rhs);
  };
  for (int d = 0; d < draws; ++d) {
    std::vector<Rational> x, eta;
    if (d == 0) {
      x.assign(dim, Rational(1));
      eta.assign(dim, Rational(1));
    } else {
      x = random_rationals(dim, rng);
      eta = random_rationals(dim, rng);
    }
    const auto [lhs, rhs] = both_sides(x, eta);
    ++rep.identities[0].draws;
    record(rep.identities[0], lhs, rhs);

    x[0] = 0;
    const auto [l0, r0] = both_sides(x, eta);
    ++rep.identities[1].draws;
    record(rep.identities[1], l0, Rational(0));
    record(rep.identities[1], r0, Rational(0));
  }
  return rep;
}

int restriction_kernel_rank(const PencilConfig& cfg, int num_samples, std::uint64_t seed) {
  const std::size_t dim = cfg.ambient_dim();
  const std::vector<Complex> reduced(cfg.mu.begin() + 1, cfg.mu.end());
  Eigen::MatrixXcd m(num_samples, static_cast<Eigen::Index>(dim));
  Rng rng(seed);
  for (int r = 0; r < num_samples;) {
    const auto x = point_on_pair(reduced, rng);
    if (!x) continue;
    Eigen::VectorXcd xi(x->size());
    for (Eigen::Index k = 0; k < xi.size(); ++k) xi(k) = rng.uniform_complex();
    xi = euler_projected(*x, xi);
    const std::vector<Complex> xv(x->data(), x->data() + x->size()), xiv(xi.data(), xi.data() + xi.size());
    const std::vector<Complex> hat = s_values_bracket<Complex>(reduced, xv, xiv);
    Eigen::VectorXcd row = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));  // h2(s_0) = 0
    for (std::size_t i = 1; i < dim; ++i) row(static_cast<Eigen::Index>(i)) = hat[i - 1];
    m.row(r) = row.transpose() / std::max(row.norm(), 1e-300);
    ++r;
  }
  return numeric_rank(m, kRankTol);
}

// ---------------------------------------------------------------------------

QuadricConfig make_quadric(std::vector<Complex> coeffs, bool require_distinct) {
  if (coeffs.size() < 3) throw PencilError(ErrorKind::InvalidConfig, "quadric needs at least 3 coefficients");
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (std::abs(coeffs[i]) <= kMuSeparation) throw PencilError(ErrorKind::InvalidConfig, "zero quadric coefficient");
    if (!require_distinct) continue;
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(coeffs[i] - coeffs[j]) <= kMuSeparation)
        throw PencilError(ErrorKind::InvalidConfig, "quadric coefficients collide");
  }
  QuadricConfig q;
  q.m = static_cast<int>(coeffs.size()) - 1;
  q.coeffs = std::move(coeffs);
  return q;
}

QuadricConfig branch_quadric(const PencilConfig& cfg) {
  std::vector<Complex> a;
  for (std::size_t j = 1; j < cfg.ambient_dim(); ++j) a.push_back(cfg.mu[j] - cfg.mu[0]);
  return make_quadric(std::move(a));
}

Eigen::VectorXcd sample_quadric_point(const QuadricConfig& q, Rng& rng) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Eigen::VectorXcd z(q.m + 1);
    Complex rest = 0.0;
    for (int j = 1; j <= q.m; ++j) {
      z(j) = rng.uniform_complex();
      rest += q.coeffs[static_cast<std::size_t>(j)] * z(j) * z(j);
    }
    const Complex z0sq = -rest / q.coeffs[0];
    if (std::abs(z0sq) <= 1e-9 * std::max(1.0, z.tail(q.m).squaredNorm())) continue;
    z(0) = std::sqrt(z0sq);
    return z;
  }
  throw PencilError(ErrorKind::Unlucky, "could not sample a point of the quadric");
}

Eigen::VectorXcd sample_quadric_covector(const QuadricConfig& q, const Eigen::VectorXcd& z, Rng& rng) {
  Eigen::VectorXcd zeta(q.m + 1);
  for (Eigen::Index j = 0; j < zeta.size(); ++j) zeta(j) = rng.uniform_complex();
  return euler_projected(z, zeta);
}

Eigen::VectorXcd construct_dual_covector(const QuadricConfig& q, const Eigen::VectorXcd& z, Rng& rng) {
  const Eigen::Index m1 = q.m + 1;
  const auto& a = q.coeffs;
  if (std::abs(z(0)) <= 1e-9 * z.norm()) throw PencilError(ErrorKind::Unlucky, "z_0 vanishes");
  for (int attempt = 0; attempt < 100; ++attempt) {
    Eigen::VectorXcd zeta(m1);
    Complex r = 0.0, p = 0.0;
    for (Eigen::Index j = 2; j < m1; ++j) {
      zeta(j) = rng.uniform_complex();
      r += z(j) * zeta(j);
      p += zeta(j) * zeta(j) / a[static_cast<std::size_t>(j)];
    }
    // zeta_0 = -(r + z_1 zeta_1) / z_0, then a quadratic in zeta_1
    const Complex w = z(0) * z(0) * a[0];
    const Complex qa = z(1) * z(1) / w + 1.0 / a[1];
    const Complex qb = 2.0 * r * z(1) / w;
    const Complex qc = r * r / w + p;
    if (std::abs(qa) <= 1e-12) continue;
    const Complex root = (-qb + std::sqrt(qb * qb - 4.0 * qa * qc)) / (2.0 * qa);
    zeta(1) = root;
    zeta(0) = -(r + z(1) * root) / z(0);
    return zeta;
  }
  throw PencilError(ErrorKind::Unlucky, "could not construct a dual covector");
}

Complex hq_prime_value(const QuadricConfig& q, const Eigen::VectorXcd& z, const Eigen::VectorXcd& zeta, double tol) {
  const auto m1 = static_cast<Eigen::Index>(q.coeffs.size());
  if (z.size() != m1 || zeta.size() != m1) throw PencilError(ErrorKind::SizeMismatch, "quadric vectors differ in size");
  Complex qz = 0.0;
  double scale = 0.0;
  Complex value = 0.0;
  for (Eigen::Index j = 0; j < m1; ++j) {
    const Complex a = q.coeffs[static_cast<std::size_t>(j)];
    qz += a * z(j) * z(j);
    scale += std::abs(a) * std::norm(z(j));
    value += zeta(j) * zeta(j) / a;
  }
  if (std::abs(qz) > tol * scale) throw PencilError(ErrorKind::OffQuadric, "point is not on the quadric");
  return value;
}

Eigen::MatrixXcd quadric_tangent_frame(const QuadricConfig& q, const Eigen::VectorXcd& z) {
  const Eigen::Index m1 = q.m + 1;
  Eigen::MatrixXcd cols(m1, 2);
  cols.col(0) = z;
  cols.col(1) = quadric_gradient(q, z).conjugate();
  if (numeric_rank(cols, 1e-10) < 2) throw PencilError(ErrorKind::SingularPoint, "quadric is singular at z");
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(cols);
  const Eigen::MatrixXcd full = qr.householderQ() * Eigen::MatrixXcd::Identity(m1, m1);
  return full.rightCols(m1 - 2);
}

Complex hq_adjugate_value(const QuadricConfig& q, const Eigen::VectorXcd& z, const Eigen::VectorXcd& zeta) {
  const Eigen::MatrixXcd frame = quadric_tangent_frame(q, z);
  const ComplexSym h = quadric_frame_hessian(q, frame);
  const ComplexSym adj = adjugate(h);
  const Eigen::VectorXcd zh = frame.transpose() * zeta;
  const std::vector<Complex> v(zh.data(), zh.data() + zh.size());
  return quadratic_form(adj, std::span<const Complex>(v));
}

DualDivisorResult dual_divisor_test(const QuadricConfig& q, const Eigen::VectorXcd& z, const Eigen::VectorXcd& zeta,
                                    double tol) {
  if (q.m < 3) throw PencilError(ErrorKind::DomainError, "tangency test needs m >= 3");
  DualDivisorResult out;
  out.hq_value = hq_prime_value(q, z, zeta);
  const Eigen::VectorXcd g = quadric_gradient(q, z);
  const Eigen::VectorXcd reduced = zeta - (g.dot(zeta) / g.squaredNorm()) * g;
  out.hq_relative = std::abs(out.hq_value) / std::max(dual_scale(q, reduced), 1e-300);
  out.hq_vanishes = out.hq_relative <= tol;

  const Eigen::MatrixXcd frame = quadric_tangent_frame(q, z);
  const Eigen::VectorXcd zh = frame.transpose() * zeta;
  if (zh.norm() <= 1e-12 * zeta.norm()) throw PencilError(ErrorKind::ZeroRestriction, "covector vanishes on T_z Q");
  const ComplexSym h = quadric_frame_hessian(q, frame);
  // normalised by the full tangent hessian, so a 1x1 restriction still reads
  const double h_max = Eigen::JacobiSVD<Eigen::MatrixXcd>(to_dense(h)).singularValues()(0);
  const auto sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(to_dense(restrict_to_hyperplane(h, zh))).singularValues();
  out.det_relative = h_max > 0.0 ? sv(sv.size() - 1) / h_max : 0.0;
  out.tangent = out.det_relative <= tol;
  return out;
}

BranchWitness branch_conormal_witness(const PencilConfig& cfg, Rng& rng, int max_draws) {
  const QuadricConfig q = branch_quadric(cfg);
  const std::vector<Complex> mu_b(cfg.mu.begin() + 1, cfg.mu.end());
  for (int draw = 1; draw <= max_draws; ++draw) {
    const auto x = point_on_pair(mu_b, rng);
    if (!x) continue;
    BranchWitness w;
    w.x = *x;
    w.zeta = 2.0 * *x;
    w.value = hq_prime_value(q, w.x, w.zeta);
    w.scale = dual_scale(q, w.zeta);
    w.draws = draw;
    if (std::abs(w.value) > 1e-6 * w.scale) return w;
  }
  std::ostringstream os;
  os << "no point of B off the dual divisor in " << max_draws << " draws";
  throw PencilError(ErrorKind::NoWitness, os.str());
}

}  // namespace pencil
