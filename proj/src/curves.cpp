#include "pencil/curves.hpp"

#include <sstream>

#include "pencil/error.hpp"

namespace pencil {

namespace {

bool collides(std::span<const Complex> pts, Complex z, double tol) {
  for (const Complex& w : pts)
    if (std::abs(w - z) <= tol) return true;
  return false;
}

}  // namespace

int hyperelliptic_genus(int branch_count) {
  if (branch_count < 3) throw PencilError(ErrorKind::DomainError, "a hyperelliptic curve needs at least 3 branch points");
  return (branch_count + 1) / 2 - 1;
}

HyperellipticData make_hyperelliptic(std::vector<Complex> branch) {
  for (std::size_t i = 0; i < branch.size(); ++i) {
    if (collides(std::span<const Complex>(branch.data(), i), branch[i], kBranchSeparation)) {
      std::ostringstream os;
      os << "branch point " << i << " collides with an earlier one";
      throw PencilError(ErrorKind::SingularCurve, os.str());
    }
  }
  HyperellipticData d;
  d.genus = hyperelliptic_genus(static_cast<int>(branch.size()));
  d.branch = std::move(branch);
  return d;
}

HyperellipticData fiber_curve(const PencilConfig& cfg, std::span<const Complex> lambdas) {
  if (static_cast<int>(lambdas.size()) != cfg.n - 1)
    throw PencilError(ErrorKind::SizeMismatch, "fiber_curve expects n-1 roots");
  std::vector<Complex> branch(cfg.mu.begin(), cfg.mu.end());
  branch.insert(branch.end(), lambdas.begin(), lambdas.end());
  return make_hyperelliptic(std::move(branch));
}

int riemann_hurwitz_genus(int g_base, int branch_count) {
  if (g_base < 0 || branch_count < 0) throw PencilError(ErrorKind::DomainError, "negative genus or branch count");
  if (branch_count % 2 != 0) throw PencilError(ErrorKind::Parity, "a double cover has an even number of branch points");
  // 2g - 2 = 2(2 g_base - 2) + b
  return 2 * g_base - 1 + branch_count / 2;
}

Genus2Picture genus2_picture(std::span<const Complex> mu, Complex p, Complex q) {
  if (mu.size() != 6) throw PencilError(ErrorKind::InvalidConfig, "the genus 2 picture needs 6 parameters");
  const HyperellipticData c = make_hyperelliptic(std::vector<Complex>(mu.begin(), mu.end()));
  if (std::abs(p - q) <= kBranchSeparation) throw PencilError(ErrorKind::DegenerateOmega, "p = q");
  if (collides(mu, p, kBranchSeparation) || collides(mu, q, kBranchSeparation))
    throw PencilError(ErrorKind::DegenerateOmega, "p or q lies in B");

  Genus2Picture d;
  d.base_branch = c.branch;
  d.genus_c = c.genus;
  // div(w) is the pullback of p + q: four distinct points of C
  d.genus_c_omega = riemann_hurwitz_genus(d.genus_c, 4);
  d.gamma_branch = c.branch;
  d.gamma_branch.push_back(p);
  d.gamma_branch.push_back(q);
  d.genus_gamma = make_hyperelliptic(d.gamma_branch).genus;
  d.prym_dim = d.genus_c_omega - d.genus_c;
  d.jacobian_gamma_dim = d.genus_gamma;
  // C_w -> P^1 has degree 4: 2 g(C_w) - 2 = 4 (-2) + R
  d.composite_ramification = 2 * d.genus_c_omega - 2 + 8;
  return d;
}

}  // namespace pencil
