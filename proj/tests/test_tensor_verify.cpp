#include <gtest/gtest.h>

#include <map>

#include "pencil/spectral.hpp"
#include "pencil/tensor_verify.hpp"

using namespace pencil;

namespace {

// Sparse multivariate polynomial over Q, used as an independent oracle for
// the exact identities: everything is expanded coefficient by coefficient.
struct MPoly {
  std::map<std::vector<int>, Rational> terms;
  static inline int vars = 0;

  static MPoly constant(const Rational& c) {
    MPoly p;
    if (c != 0) p.terms[std::vector<int>(static_cast<std::size_t>(vars), 0)] = c;
    return p;
  }
  static MPoly var(int k) {
    MPoly p;
    std::vector<int> e(static_cast<std::size_t>(vars), 0);
    e[static_cast<std::size_t>(k)] = 1;
    p.terms[e] = 1;
    return p;
  }
  MPoly& operator+=(const MPoly& o) {
    for (const auto& [e, c] : o.terms) {
      Rational& slot = terms[e];
      slot += c;
      if (slot == 0) terms.erase(e);
    }
    return *this;
  }
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a += b * MPoly::constant(-1); }
  friend MPoly operator*(const MPoly& a, const MPoly& b) {
    MPoly out;
    for (const auto& [ea, ca] : a.terms)
      for (const auto& [eb, cb] : b.terms) {
        std::vector<int> e(ea);
        for (std::size_t k = 0; k < e.size(); ++k) e[k] += eb[k];
        MPoly t;
        t.terms[e] = ca * cb;
        out += t;
      }
    return out;
  }
  bool is_zero() const { return terms.empty(); }
};

// Variables: x_0..x_4 are 0..4, xi_0..xi_4 are 5..9, t is 10.
constexpr int kDim = 5;
MPoly X(int i) { return MPoly::var(i); }
MPoly XI(int i) { return MPoly::var(kDim + i); }

const std::vector<Rational>& mu_hand() {
  static const std::vector<Rational> mu = {0, 1, 2, 3, 4};
  return mu;
}

// s_i with arbitrary polynomial arguments in place of (x, xi).
MPoly s_poly(std::size_t i, const std::vector<MPoly>& x, const std::vector<MPoly>& xi) {
  const auto& mu = mu_hand();
  MPoly acc;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (j == i) continue;
    const MPoly br = x[i] * xi[j] - x[j] * xi[i];
    acc += br * br * MPoly::constant(Rational(1) / (mu[j] - mu[i]));
  }
  return acc;
}

}  // namespace

TEST(SymbolicOracle, IdentitiesExpandToZero) {
  MPoly::vars = 2 * kDim + 1;
  const auto& mu = mu_hand();
  std::vector<MPoly> x, xi;
  for (int i = 0; i < kDim; ++i) {
    x.push_back(X(i));
    xi.push_back(XI(i));
  }
  MPoly q1, q2, euler;
  std::vector<MPoly> g1, g2;
  for (int j = 0; j < kDim; ++j) {
    q1 += X(j) * X(j);
    q2 += MPoly::constant(mu[static_cast<std::size_t>(j)]) * X(j) * X(j);
    euler += X(j) * XI(j);
    g1.push_back(MPoly::constant(2) * X(j));
    g2.push_back(MPoly::constant(2 * mu[static_cast<std::size_t>(j)]) * X(j));
  }
  const MPoly t = MPoly::var(2 * kDim);

  MPoly total;
  for (std::size_t i = 0; i < kDim; ++i) {
    const Rational mi = mu[i];
    total += s_poly(i, x, xi);

    // s_i(xi + t grad q2) = s_i(xi) + t * linear + t^2 * quadratic
    std::vector<MPoly> shifted;
    for (int j = 0; j < kDim; ++j) shifted.push_back(XI(j) + t * g2[static_cast<std::size_t>(j)]);
    const MPoly linear = MPoly::constant(4) * X(static_cast<int>(i)) * X(static_cast<int>(i)) * euler -
                        MPoly::constant(4) * X(static_cast<int>(i)) * XI(static_cast<int>(i)) * q1;
    const MPoly quadratic = MPoly::constant(4) * X(static_cast<int>(i)) * X(static_cast<int>(i)) *
                           (q2 - MPoly::constant(mi) * q1);
    EXPECT_TRUE((s_poly(i, x, shifted) - s_poly(i, x, xi) - t * linear - t * t * quadratic).is_zero()) << i;

    // grad q1 is in the kernel of every S_i(x)
    std::vector<MPoly> shifted1;
    for (int j = 0; j < kDim; ++j) shifted1.push_back(XI(j) + t * g1[static_cast<std::size_t>(j)]);
    EXPECT_TRUE((s_poly(i, x, shifted1) - s_poly(i, x, xi)).is_zero()) << i;
  }
  EXPECT_TRUE(total.is_zero());

  // restriction to x_0 = xi_0 = 0, and the pushforward of s_0
  std::vector<MPoly> xr = x, xir = xi;
  xr[0] = MPoly();
  xir[0] = MPoly();
  EXPECT_TRUE(s_poly(0, xr, xir).is_zero());
  std::vector<MPoly> vertical = xi;
  vertical[0] = MPoly();
  MPoly push;
  for (int j = 1; j < kDim; ++j)
    push += MPoly::constant(Rational(1) / (mu[static_cast<std::size_t>(j)] - mu[0])) * XI(j) * XI(j);
  EXPECT_TRUE((s_poly(0, x, vertical) - X(0) * X(0) * push).is_zero());
}

TEST(SymbolicOracle, LibraryMatchesExpansionAtRationalPoints) {
  MPoly::vars = 2 * kDim + 1;
  std::vector<MPoly> x, xi;
  for (int i = 0; i < kDim; ++i) {
    x.push_back(X(i));
    xi.push_back(XI(i));
  }
  Rng rng(3);
  for (int draw = 0; draw < 10; ++draw) {
    std::vector<Rational> xv(kDim), xiv(kDim);
    for (auto& r : xv) r = rng.small_rational();
    for (auto& r : xiv) r = rng.small_rational();
    for (std::size_t i = 0; i < kDim; ++i) {
      Rational expected = 0;
      for (const auto& [e, c] : s_poly(i, x, xi).terms) {
        Rational m = c;
        for (int k = 0; k < 2 * kDim; ++k)
          for (int p = 0; p < e[static_cast<std::size_t>(k)]; ++p) m *= k < kDim ? xv[static_cast<std::size_t>(k)] : xiv[static_cast<std::size_t>(k - kDim)];
        expected += m;
      }
      const RationalSym s = s_matrix<Rational>(std::span<const Rational>(mu_hand()), i, std::span<const Rational>(xv));
      EXPECT_EQ(quadratic_form(s, std::span<const Rational>(xiv)), expected);
    }
  }
}

TEST(ExactIdentities, AllSuitesPassOnRandomPencils) {
  Rng rng(10);
  for (int n = 2; n <= 4; ++n) {
    const ExactPencilConfig cfg = random_exact_config(n, rng);
    for (const VerificationReport& rep : {restriction_identity_check(cfg, rng), bilinear_defect_identity_check(cfg, rng),
                                          s0_pushforward_identity(cfg, rng)}) {
      EXPECT_TRUE(rep.passed()) << rep.suite;
      for (const IdentityReport& id : rep.identities) {
        EXPECT_GE(id.draws, 50) << id.name;
        EXPECT_EQ(id.failures, 0) << id.name;
      }
    }
  }
}

TEST(ExactIdentities, ReportAggregation) {
  IdentityReport r{"probe"};
  r.draws = 1;
  r.failures = 1;
  EXPECT_FALSE(r.passed());
  VerificationReport v{"probe", {r}};
  EXPECT_FALSE(v.passed());
  EXPECT_FALSE(VerificationReport{}.passed());
}

TEST(Ranks, DimWEqualsN) {
  Rng rng(20);
  for (int n = 2; n <= 5; ++n) {
    const PencilConfig cfg = random_config(n, rng);
    EXPECT_EQ(dim_W(cfg, 4 * (n + 3), 1), n);
    EXPECT_EQ(dim_W(cfg, 8 * (n + 3), 2), n);
  }
}

TEST(Ranks, FreenessMatchesPolynomialRingDimension) {
  const PencilConfig cfg = integer_config(3);
  for (int d = 1; d <= 4; ++d) {
    const auto expected = binomial(3 + d - 1, d);
    EXPECT_EQ(freeness_rank(cfg, d, {0, 1, 2}, static_cast<int>(2 * expected + 20), 4), expected) << d;
  }
}

TEST(Ranks, TooManyBasisElementsDropRank) {
  // n+1 of the s_i are dependent, so their degree-1 monomials have rank n
  const PencilConfig cfg = integer_config(3);
  EXPECT_EQ(freeness_rank(cfg, 1, {0, 1, 2, 3}, 40, 4), 3);
}

TEST(Ranks, AnyNBasis) {
  const BasisCheck exhaustive = any_n_basis_check(integer_config(3), 40, 5);
  EXPECT_TRUE(exhaustive.passed);
  EXPECT_EQ(exhaustive.subsets_checked, binomial(6, 3));
  const BasisCheck sampled = any_n_basis_check(integer_config(5), 60, 5);
  EXPECT_TRUE(sampled.passed);
  EXPECT_EQ(sampled.subsets_checked, 20);
}

TEST(Ranks, RestrictionKernelIsSpannedByS0) {
  Rng rng(21);
  for (int n = 2; n <= 5; ++n) EXPECT_EQ(restriction_kernel_rank(random_config(n, rng), 40, 6), n - 1);
}

TEST(Ranks, Binomial) {
  EXPECT_EQ(binomial(6, 3), 20);
  EXPECT_EQ(binomial(7, 4), 35);
  EXPECT_EQ(binomial(3, 5), 0);
  EXPECT_EQ(binomial(4, 0), 1);
}

TEST(Quadric, AdjugateRatioIsConstantAtFixedPoint) {
  Rng rng(30);
  const QuadricConfig q = make_quadric({1.0, 2.0, Complex(-1.5, 0.5), 3.0, Complex(0.5, 2.0)});
  for (int k = 0; k < 5; ++k) {
    const Eigen::VectorXcd z = sample_quadric_point(q, rng);
    Complex ratio{};
    for (int j = 0; j < 6; ++j) {
      const Eigen::VectorXcd zeta = sample_quadric_covector(q, z, rng);
      const Complex r = hq_adjugate_value(q, z, zeta) / hq_prime_value(q, z, zeta);
      if (j == 0) ratio = r;
      EXPECT_LE(std::abs(r - ratio), 1e-9 * std::abs(ratio));
    }
  }
}

TEST(Quadric, DualCovectorIsOnDualQuadric) {
  Rng rng(31);
  const QuadricConfig q = branch_quadric(integer_config(3));
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXcd z = sample_quadric_point(q, rng);
    const Eigen::VectorXcd zeta = construct_dual_covector(q, z, rng);
    EXPECT_LE(std::abs(Complex((z.transpose() * zeta)(0))), 1e-12 * z.norm() * zeta.norm());
    EXPECT_LE(std::abs(hq_prime_value(q, z, zeta)), 1e-12 * zeta.squaredNorm());
  }
}

TEST(Quadric, DualDivisorAgreesWithDeterminantOracle) {
  Rng rng(32);
  const QuadricConfig q = make_quadric({1.0, 2.0, 3.5, -1.0, Complex(0.5, 1.0)});
  int tangent = 0;
  for (int k = 0; k < 100; ++k) {
    const Eigen::VectorXcd z = sample_quadric_point(q, rng);
    const Eigen::VectorXcd zeta = k % 2 ? construct_dual_covector(q, z, rng) : sample_quadric_covector(q, z, rng);
    const DualDivisorResult r = dual_divisor_test(q, z, zeta);
    EXPECT_TRUE(r.agree()) << k << " " << r.hq_relative << " " << r.det_relative;
    tangent += r.tangent;
  }
  EXPECT_EQ(tangent, 50);
}

TEST(Quadric, ConormalShiftLeavesDualFormUnchanged) {
  Rng rng(33);
  const QuadricConfig q = make_quadric({1.0, -2.0, 3.0, 5.0});
  const Eigen::VectorXcd z = sample_quadric_point(q, rng);
  const Eigen::VectorXcd zeta = sample_quadric_covector(q, z, rng);
  Eigen::VectorXcd grad(z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) grad(j) = 2.0 * q.coeffs[static_cast<std::size_t>(j)] * z(j);
  const Complex a = hq_prime_value(q, z, zeta);
  const Complex b = hq_prime_value(q, z, zeta + Complex(0.7, -0.3) * grad);
  EXPECT_LE(std::abs(a - b), 1e-12 * std::abs(a));
}

TEST(Quadric, Errors) {
  EXPECT_THROW(make_quadric({1.0, 2.0}), PencilError);
  EXPECT_THROW(make_quadric({1.0, 0.0, 2.0}), PencilError);
  EXPECT_THROW(make_quadric({1.0, 1.0, 2.0}), PencilError);
  EXPECT_NO_THROW(make_quadric({1.0, 1.0, 2.0}, false));
  const QuadricConfig q = make_quadric({1.0, 2.0, 3.0, 4.0});
  Eigen::VectorXcd off = Eigen::VectorXcd::Ones(4);
  try {
    hq_prime_value(q, off, off);
    FAIL();
  } catch (const PencilError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OffQuadric);
  }
  const QuadricConfig small = make_quadric({1.0, 2.0, 3.0});
  Rng rng(1);
  const Eigen::VectorXcd z = sample_quadric_point(small, rng);
  EXPECT_THROW(dual_divisor_test(small, z, sample_quadric_covector(small, z, rng)), PencilError);
}

TEST(Quadric, BranchWitnessFound) {
  Rng rng(40);
  for (int n = 2; n <= 5; ++n) {
    const PencilConfig cfg = random_config(n, rng);
    const BranchWitness w = branch_conormal_witness(cfg, rng);
    EXPECT_LE(w.draws, 1000);
    EXPECT_GT(std::abs(w.value), 1e-6 * w.scale);
    Complex s1 = 0.0, s2 = 0.0;
    for (Eigen::Index j = 0; j < w.x.size(); ++j) {
      s1 += w.x(j) * w.x(j);
      s2 += cfg.mu[static_cast<std::size_t>(j + 1)] * w.x(j) * w.x(j);
    }
    EXPECT_LE(std::abs(s1) + std::abs(s2), 1e-10 * w.x.squaredNorm());
  }
}
