#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "pencil/matrix.hpp"
#include "pencil/random.hpp"
#include "pencil/scalar.hpp"

namespace pencil {

/// The variety X = {q1 = q2 = 0} in P^{n+2}, with q1 = sum x_i^2 and
/// q2 = sum mu_i x_i^2 for n+3 pairwise distinct mu_i.
template <class S>
struct BasicPencilConfig {
  int n = 0;
  std::vector<S> mu;

  std::size_t ambient_dim() const { return static_cast<std::size_t>(n) + 3; }
};

using PencilConfig = BasicPencilConfig<Complex>;
using ExactPencilConfig = BasicPencilConfig<Rational>;

/// Minimum separation between float pencil parameters.
inline constexpr double kMuSeparation = 1e-6;

/// Validating constructors; throw InvalidConfig on bad size, n < 2, or
/// colliding parameters.
PencilConfig make_config(int n, std::vector<Complex> mu);
ExactPencilConfig make_exact_config(int n, std::vector<Rational> mu);

PencilConfig to_complex(const ExactPencilConfig& cfg);

/// mu_i = i (the integer pencil 0, 1, ..., n+2).
PencilConfig integer_config(int n);

/// mu_i uniform in the unit complex box, pairwise separation at least 0.1.
PencilConfig random_config(int n, Rng& rng);

/// mu_i small random rationals, pairwise distinct.
ExactPencilConfig random_exact_config(int n, Rng& rng);

struct AmbientPoint {
  Eigen::VectorXcd x;
};

struct MembershipResidual {
  double q1 = 0.0;  ///< |q1(x)| / |x|^2
  double q2 = 0.0;  ///< |q2(x)| / (max|mu| |x|^2)
};

inline constexpr double kMembershipTol = 1e-9;

MembershipResidual membership_residual(const PencilConfig& cfg, const Eigen::VectorXcd& x);
bool on_variety(const PencilConfig& cfg, const Eigen::VectorXcd& x, double tol = kMembershipTol);

/// Wraps a caller-supplied vector, throwing InvalidPoint when it is off X.
AmbientPoint make_point(const PencilConfig& cfg, Eigen::VectorXcd x);

/// Completes the tail (x_2, ..., x_{n+2}) to a point of X by solving the
/// 2x2 system for (x_0^2, x_1^2) and taking principal square roots.
/// Throws Unlucky if x_0 or x_1 comes out (numerically) zero.
AmbientPoint point_from_tail(const PencilConfig& cfg, const Eigen::VectorXcd& tail);

/// Random point of X (tail entries uniform in the unit complex box).
AmbientPoint sample_point(const PencilConfig& cfg, Rng& rng);

Eigen::VectorXcd gradient_q1(const Eigen::VectorXcd& x);
Eigen::VectorXcd gradient_q2(const PencilConfig& cfg, const Eigen::VectorXcd& x);

/// Ambient covector representative; the cotangent vector is its class
/// modulo span(grad q1, grad q2). Euler-orthogonal: sum x_i xi_i = 0.
struct CotangentSample {
  AmbientPoint point;
  Eigen::VectorXcd xi;
};

/// Wraps a caller-supplied covector, throwing InvalidPoint when it is not
/// Euler-orthogonal within 1e-9 relative.
CotangentSample make_cotangent(const PencilConfig& cfg, const AmbientPoint& point, Eigen::VectorXcd xi);

/// n ambient vectors spanning T_x X: the kernel of (dq1, dq2) intersected
/// with the Hermitian complement of x, orthonormal for the Hermitian product.
/// The construction is a fixed Householder QR, so the frame is a
/// deterministic function of x.
struct TangentFrame {
  AmbientPoint point;
  Eigen::MatrixXcd vectors;  ///< (n+3) x n

  int size() const { return static_cast<int>(vectors.cols()); }
};

TangentFrame tangent_frame(const PencilConfig& cfg, const AmbientPoint& point);

/// Re-orthonormalises a frame for the complex bilinear form v^T w (so the
/// hessian of q1 becomes the identity). Throws SingularPoint when an
/// isotropic pivot shows up.
TangentFrame bilinear_normalized(const TangentFrame& frame);

/// Random Euler-orthogonal covector with nonzero restriction to T_x X.
CotangentSample sample_cotangent(const PencilConfig& cfg, const AmbientPoint& point, Rng& rng);

/// Random point together with a random cotangent vector there.
CotangentSample sample_cotangent(const PencilConfig& cfg, Rng& rng);

/// A member of the pencil {t q1 - q2}, or one of its two generators.
struct PencilMember {
  enum class Kind { Q1, Q2, At };
  Kind kind = Kind::At;
  Complex t{};

  static PencilMember q1() { return {Kind::Q1, {}}; }
  static PencilMember q2() { return {Kind::Q2, {}}; }
  static PencilMember at(Complex t) { return {Kind::At, t}; }
};

/// Diagonal of the ambient matrix of a pencil member.
Eigen::VectorXcd member_diagonal(const PencilConfig& cfg, const PencilMember& member);

/// Gram matrix v_a^T M v_b of the member's quadratic form on the frame.
ComplexSym hessian_matrix(const PencilConfig& cfg, const TangentFrame& frame, const PencilMember& member);

/// Frame coordinates xi_hat_a = <xi, v_a> (bilinear pairing).
Eigen::VectorXcd frame_coordinates(const TangentFrame& frame, const Eigen::VectorXcd& xi);

/// Hermitian-orthonormal basis (n x (n-1)) of ker(xi_coords) in frame
/// coordinates. Throws ZeroCovector if xi_coords vanishes.
Eigen::MatrixXcd hyperplane_basis(const Eigen::VectorXcd& xi_coords);

/// The form restricted to ker(xi_coords), in the basis of hyperplane_basis().
ComplexSym restrict_to_hyperplane(const ComplexSym& a, const Eigen::VectorXcd& xi_coords);

/// True iff the tangent hessian of the member has numeric rank >= n-1.
bool rank_bound_check(const PencilConfig& cfg, const AmbientPoint& point, const PencilMember& member);

}  // namespace pencil
