#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pencil/kernels.hpp"
#include "pencil/random.hpp"
#include "pencil/variety.hpp"

namespace pencil {

// ---------------------------------------------------------------------------
// Evaluation ranks of the s-tensors and their monomials
// ---------------------------------------------------------------------------

inline constexpr double kRankTol = 1e-8;

/// Rank of the num_samples x (n+3) matrix of s-values. Expected: n.
int dim_W(const PencilConfig& cfg, int num_samples, std::uint64_t seed, Execution exec = Execution::Parallel);

/// Rank of all degree-d monomials in the chosen n s-values. Expected:
/// binom(n+d-1, d).
int freeness_rank(const PencilConfig& cfg, int d, const std::vector<std::size_t>& basis, int num_samples,
                  std::uint64_t seed, Execution exec = Execution::Parallel);

long long binomial(int n, int k);

struct BasisCheck {
  bool passed = true;
  int subsets_checked = 0;
  std::vector<std::vector<std::size_t>> failures;
};

/// Every n-subset of {s_0..s_{n+2}} has evaluation rank n. Exhaustive when
/// n <= max_exhaustive, otherwise `random_subsets` subsets drawn from seed.
BasisCheck any_n_basis_check(const PencilConfig& cfg, int num_samples, std::uint64_t seed, int max_exhaustive = 4,
                             int random_subsets = 20);

// ---------------------------------------------------------------------------
// Exact polynomial identities at random rational points
// ---------------------------------------------------------------------------

struct IdentityReport {
  std::string name;
  int draws = 0;
  int failures = 0;
  double max_residual = 0.0;  ///< exact checks report 0 or the size of the first mismatch

  bool passed() const { return draws > 0 && failures == 0; }
};

struct VerificationReport {
  std::string suite;
  std::vector<IdentityReport> identities;

  bool passed() const;
};

/// With x_0 = xi_0 = 0: s_0 vanishes and s_i (i >= 1) equals the s_i-form of
/// the reduced pencil (mu_1, .., mu_{n+2}). Exact.
VerificationReport restriction_identity_check(const ExactPencilConfig& cfg, Rng& rng, int draws = 50);

/// The polarisation of s_i against the conormals: the t-coefficients of
/// s_i(xi + t grad q_k). Exact at arbitrary (x, xi), no membership needed:
///   linear, q2:    4 x_i^2 <x, xi> - 4 x_i xi_i q1(x)
///   quadratic, q2: 4 x_i^2 (q2(x) - mu_i q1(x))
///   linear, q1:    0
VerificationReport bilinear_defect_identity_check(const ExactPencilConfig& cfg, Rng& rng, int draws = 50);

/// s_0(x, (0, eta)) = x_0^2 sum_{j >= 1} eta_j^2 / (mu_j - mu_0). Exact.
VerificationReport s0_pushforward_identity(const ExactPencilConfig& cfg, Rng& rng, int draws = 50);

/// Evaluation rank of {s_i restricted to x_0 = xi_0 = 0}, sampled on the
/// reduced variety. Expected: n-1 (the degree-2 kernel is span{s_0}).
int restriction_kernel_rank(const PencilConfig& cfg, int num_samples, std::uint64_t seed);

// ---------------------------------------------------------------------------
// A smooth quadric Q = {sum a_j z_j^2 = 0} in P^m and its dual form
// ---------------------------------------------------------------------------

struct QuadricConfig {
  int m = 0;
  std::vector<Complex> coeffs;  ///< m+1 nonzero entries
};

/// Throws InvalidConfig on wrong size, a zero coefficient, or (when
/// require_distinct) two coefficients closer than 1e-6.
QuadricConfig make_quadric(std::vector<Complex> coeffs, bool require_distinct = true);

/// a_j = mu_j - mu_0 for j >= 1: the quadric that X double covers.
QuadricConfig branch_quadric(const PencilConfig& cfg);

Eigen::VectorXcd sample_quadric_point(const QuadricConfig& q, Rng& rng);

/// Random covector with sum z_j zeta_j = 0.
Eigen::VectorXcd sample_quadric_covector(const QuadricConfig& q, const Eigen::VectorXcd& z, Rng& rng);

/// Covector on the dual quadric: sum z_j zeta_j = 0 and sum zeta_j^2 / a_j = 0.
Eigen::VectorXcd construct_dual_covector(const QuadricConfig& q, const Eigen::VectorXcd& z, Rng& rng);

/// sum_j zeta_j^2 / a_j. Throws OffQuadric when |q(z)| > tol * sum |a_j| |z_j|^2.
Complex hq_prime_value(const QuadricConfig& q, const Eigen::VectorXcd& z, const Eigen::VectorXcd& zeta,
                       double tol = 1e-9);

/// Hermitian-orthonormal frame of T_z Q (ambient vectors, m+1 x (m-1)).
Eigen::MatrixXcd quadric_tangent_frame(const QuadricConfig& q, const Eigen::VectorXcd& z);

/// zeta_hat^T adj(H) zeta_hat with H the frame hessian of q at z.
Complex hq_adjugate_value(const QuadricConfig& q, const Eigen::VectorXcd& z, const Eigen::VectorXcd& zeta);

struct DualDivisorResult {
  Complex hq_value{};
  double hq_relative = 0.0;   ///< |h'_q| / sum |zeta_j|^2 / |a_j| (conormal part removed)
  double det_relative = 0.0;  ///< sigma_min of the hessian on ker zeta over sigma_max on T_z Q
  bool hq_vanishes = false;
  bool tangent = false;       ///< the determinant oracle fires
  bool agree() const { return hq_vanishes == tangent; }
};

/// Both tests for "ker zeta is tangent to Q_z": the dual form vanishes, and
/// the hessian restricted to the hyperplane is singular.
DualDivisorResult dual_divisor_test(const QuadricConfig& q, const Eigen::VectorXcd& z, const Eigen::VectorXcd& zeta,
                                    double tol = 1e-8);

struct BranchWitness {
  Eigen::VectorXcd x;     ///< point of B, coordinates x_1..x_{n+2}
  Eigen::VectorXcd zeta;  ///< conormal of B in Q: the gradient of sum x_j^2
  Complex value{};        ///< h'_Q(zeta)
  double scale = 0.0;     ///< sum |zeta_j|^2 / |a_j|
  int draws = 0;
};

/// First point of B = {sum x_j^2 = sum mu_j x_j^2 = 0} where the conormal
/// section is off the dual divisor: |h'_Q| > 1e-6 scale. NoWitness after
/// max_draws attempts.
BranchWitness branch_conormal_witness(const PencilConfig& cfg, Rng& rng, int max_draws = 1000);

}  // namespace pencil
