#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pencil/error.hpp"
#include "pencil/matrix.hpp"
#include "pencil/poly.hpp"
#include "pencil/variety.hpp"

namespace pencil {

// ---------------------------------------------------------------------------
// The quadratic tensors s_i = sum_{j != i} (x_i d_j - x_j d_i)^2 / (mu_j - mu_i)
// ---------------------------------------------------------------------------

/// Matrix S_i(x) with xi^T S_i(x) xi = sum_{j != i} (x_i xi_j - x_j xi_i)^2 / (mu_j - mu_i).
/// Defined for any x; the identities it satisfies are only claimed on X.
template <class S>
SymMatrix<S> s_matrix(std::span<const S> mu, std::size_t i, std::span<const S> x) {
  const std::size_t dim = mu.size();
  if (x.size() != dim) throw PencilError(ErrorKind::SizeMismatch, "s_matrix: x has wrong size");
  if (i >= dim) throw PencilError(ErrorKind::DomainError, "s_matrix: index out of range");
  SymMatrix<S> m(dim);
  S ii = ScalarTraits<S>::zero();
  for (std::size_t j = 0; j < dim; ++j) {
    if (j == i) continue;
    const S inv = ScalarTraits<S>::one() / S(mu[j] - mu[i]);
    m(j, j) = x[i] * x[i] * inv;
    ii = ii + x[j] * x[j] * inv;
    m(i, j) = -(x[i] * x[j] * inv);
  }
  m(i, i) = ii;
  return m;
}

template <class S>
SymMatrix<S> s_matrix(const BasicPencilConfig<S>& cfg, std::size_t i, std::span<const S> x) {
  return s_matrix<S>(std::span<const S>(cfg.mu), i, x);
}

template <class S>
S bilinear_form(const SymMatrix<S>& m, std::span<const S> a, std::span<const S> b) {
  S acc = ScalarTraits<S>::zero();
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) acc = acc + a[i] * m(i, j) * b[j];
  return acc;
}

template <class S>
S quadratic_form(const SymMatrix<S>& m, std::span<const S> xi) {
  return bilinear_form(m, xi, xi);
}

/// The n+3 values s_i(x, xi) = xi^T S_i(x) xi.
Eigen::VectorXcd phi_s(const PencilConfig& cfg, const CotangentSample& sample);

/// Same values from the bracket sum directly, over any scalar type that
/// mixes with Complex (plain complex or forward-mode duals).
template <class T>
std::vector<T> s_values_bracket(std::span<const Complex> mu, std::span<const T> x, std::span<const T> xi) {
  const std::size_t dim = mu.size();
  std::vector<T> out(dim, T(Complex(0.0)));
  for (std::size_t i = 0; i < dim; ++i) {
    T acc = T(Complex(0.0));
    for (std::size_t j = 0; j < dim; ++j) {
      if (j == i) continue;
      const T bracket = x[i] * xi[j] - x[j] * xi[i];
      acc = acc + bracket * bracket * T(Complex(1.0) / (mu[j] - mu[i]));
    }
    out[i] = acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// The adjugate encoding Psi(t) = xi_hat^T adj(t A - B) xi_hat
// ---------------------------------------------------------------------------

/// Volume of the frame for the ambient trivialisation
/// det[x | v_1 .. v_n | u_1 | u_2], where dq_k(u_l) = delta_kl.
/// Changing the frame by G multiplies it by det(G).
Complex frame_volume(const PencilConfig& cfg, const TangentFrame& frame);

/// Psi in the given frame: xi_hat^T adj(t A - B) xi_hat, with A, B the frame
/// hessians of q1, q2. Degree <= n-1; depends on the frame through an
/// overall det(G)^2. Throws ZeroRestriction when xi_hat vanishes.
Poly<Complex> psi_poly(const PencilConfig& cfg, const TangentFrame& frame, const CotangentSample& sample);

/// psi_poly divided by frame_volume^2: independent of the frame, and a fixed
/// linear image of the s-values.
Poly<Complex> psi_poly_normalized(const PencilConfig& cfg, const TangentFrame& frame, const CotangentSample& sample);

/// Relative cut below which a leading coefficient counts as a degree drop.
inline constexpr double kDegreeDropTol = 1e-10;

/// Roots of Psi. Throws DegenerateDrop if deg Psi < n-1.
std::vector<Complex> fiber_roots(const PencilConfig& cfg, const TangentFrame& frame, const CotangentSample& sample);

/// Values of t where t A|_H - B|_H is singular, H = ker xi_hat.
std::vector<Complex> singular_members(const PencilConfig& cfg, const TangentFrame& frame,
                                      const CotangentSample& sample);

struct SpectralValue {
  Poly<Complex> psi;      ///< frame-normalised Psi coefficients
  Eigen::VectorXcd s;     ///< s_0 .. s_{n+2}
  std::vector<Complex> roots;
};

SpectralValue spectral_value(const PencilConfig& cfg, const CotangentSample& sample);

/// Linear map between the two encodings: psi_coeffs = L * (s_{i_1}, .., s_{i_n}).
struct SToPsiMap {
  Eigen::MatrixXcd L;
  std::vector<std::size_t> indices;
  double training_residual = 0.0;
  double holdout_residual = 0.0;
};

inline constexpr double kGaugeTol = 1e-6;

/// Least-squares fit of L on `training`, validated on `holdout`.
/// Needs >= 4n training and >= n holdout samples (DomainError otherwise);
/// throws GaugeError if the holdout relative residual exceeds 1e-6.
SToPsiMap s_to_psi_map(const PencilConfig& cfg, std::span<const CotangentSample> training,
                       std::span<const CotangentSample> holdout, std::vector<std::size_t> indices = {});

/// Predicted Psi coefficients for one sample.
Eigen::VectorXcd apply_map(const SToPsiMap& map, const Eigen::VectorXcd& s_values);

// ---------------------------------------------------------------------------
// Plane lifts into the auxiliary family Q1 = Q2 = 0 in P^{2n+1}
// ---------------------------------------------------------------------------

/// Ambient coordinates (x_0..x_{n+2}; y_1..y_{n-1}).
struct PlaneLift {
  std::vector<Complex> lambdas;  ///< n-1 pencil parameters
  Eigen::MatrixXcd alpha;        ///< row i: the linear form alpha_i in hyperplane-basis coordinates
  Eigen::MatrixXcd plane_basis;  ///< (2n+2) x n, first column (x, 0)
};

/// Builds (lambda, alpha) from the simultaneous diagonalisation
/// h_q1|_H = -sum alpha_i^2, h_q2|_H = -sum lambda_i alpha_i^2, and the plane
/// through (x, 0) and the graphs (h_b, alpha(h_b)).
PlaneLift plane_lift(const PencilConfig& cfg, const TangentFrame& frame, const CotangentSample& sample);

struct PlaneResiduals {
  double q1 = 0.0;  ///< max |basis^T M_Q1 basis| / max |basis_col|^2
  double q2 = 0.0;
};

PlaneResiduals plane_gram_residuals(const PencilConfig& cfg, const PlaneLift& lift);

/// Another representative of the same lift class: alpha_i -> -alpha_i.
PlaneLift flip_alpha_sign(const PlaneLift& lift, std::size_t i);

/// Another representative: (lambda_i, alpha_i) reordered by `perm`.
PlaneLift permute_lift(const PlaneLift& lift, std::span<const std::size_t> perm);

struct PlaneImage {
  AmbientPoint point;
  Eigen::VectorXcd xi;  ///< covector vanishing on the projected tangent plane
};

/// (P, lambda) -> (x = P n P^{n+2}, pi_* T_x P). Throws BadIncidence when P
/// meets {y = 0} in more than a point.
PlaneImage psi_of_plane(const PencilConfig& cfg, const PlaneLift& lift);

/// sin of the Hermitian angle between two lines in C^m.
double projective_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

// ---------------------------------------------------------------------------

struct CodimStratum {
  long long codim = 0;              ///< (k-l)(k-l-1) + 2(l+1)
  long long grassmannian_codim = 0; ///< k(k+1) + (l+1)(l+4)
  long long corank = 0;             ///< (k+1)(l+1)
};

/// Codimension of the stratum of planes meeting P^{n+2} in dimension k and
/// P^{n-2} in dimension l. DomainError unless k >= 0 and l >= -1.
CodimStratum codim_stratum(long long k, long long l);

}  // namespace pencil
