#pragma once

#include <span>
#include <vector>

#include "pencil/variety.hpp"

namespace pencil {

/// Collisions closer than this make the double cover singular.
inline constexpr double kBranchSeparation = 1e-8;

/// y^2 = prod (t - b) over the finite branch points. An odd count means
/// infinity is branched as well, so genus = ceil(|branch| / 2) - 1.
struct HyperellipticData {
  std::vector<Complex> branch;
  int genus = 0;
};

/// Throws SingularCurve on a collision, DomainError on fewer than 3 points.
HyperellipticData make_hyperelliptic(std::vector<Complex> branch);

int hyperelliptic_genus(int branch_count);

/// The spectral curve of a fiber: branched over mu_0..mu_{n+2} and the n-1
/// fiber roots. Genus n.
HyperellipticData fiber_curve(const PencilConfig& cfg, std::span<const Complex> lambdas);

/// Genus of a double cover of a genus g_base curve with branch_count branch
/// points: 2g - 2 = 2(2 g_base - 2) + branch_count. Parity on odd counts.
int riemann_hurwitz_genus(int g_base, int branch_count);

/// Branch and genus data for the n = 3 picture: the genus 2 curve C over the
/// six singular members, the double cover C_w of C branched over the four
/// points above p and q, and Gamma branched over B + {p, q}.
struct Genus2Picture {
  std::vector<Complex> base_branch;  ///< B
  std::vector<Complex> gamma_branch;  ///< B + {p, q}
  int genus_c = 0;
  int genus_c_omega = 0;
  int genus_gamma = 0;
  int prym_dim = 0;            ///< g(C_w) - g(C)
  int jacobian_gamma_dim = 0;  ///< g(Gamma)
  int composite_ramification = 0;  ///< total ramification of C_w -> P^1 (degree 4)
};

/// Throws InvalidConfig unless mu has 6 distinct entries, DegenerateOmega
/// when p = q or p or q meets B.
Genus2Picture genus2_picture(std::span<const Complex> mu, Complex p, Complex q);

}  // namespace pencil
