#include <gtest/gtest.h>

#include "pencil/curves.hpp"
#include "pencil/spectral.hpp"

using namespace pencil;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const PencilError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::DomainError;
}

}  // namespace

TEST(Hyperelliptic, GenusFromBranchCount) {
  EXPECT_EQ(hyperelliptic_genus(6), 2);
  EXPECT_EQ(hyperelliptic_genus(5), 2);  // infinity branched too
  EXPECT_EQ(hyperelliptic_genus(8), 3);
  EXPECT_EQ(hyperelliptic_genus(3), 1);
  EXPECT_EQ(kind_of([] { hyperelliptic_genus(2); }), ErrorKind::DomainError);
}

TEST(Hyperelliptic, FiberCurveExamples) {
  const PencilConfig two = integer_config(2);
  const std::vector<Complex> one = {Complex(0.5, 0.5)};
  const HyperellipticData c2 = fiber_curve(two, one);
  EXPECT_EQ(c2.branch.size(), 6u);
  EXPECT_EQ(c2.genus, 2);
  const std::vector<Complex> pair = {Complex(0.5, 0.5), Complex(-1.0, 2.0)};
  const HyperellipticData c3 = fiber_curve(integer_config(3), pair);
  EXPECT_EQ(c3.branch.size(), 8u);
  EXPECT_EQ(c3.genus, 3);
  const std::vector<Complex> collide = {Complex(0.0, 1e-10)};
  EXPECT_EQ(kind_of([&] { fiber_curve(two, collide); }), ErrorKind::SingularCurve);
  EXPECT_EQ(kind_of([&] { fiber_curve(two, pair); }), ErrorKind::SizeMismatch);
}

TEST(Hyperelliptic, FiberRootsGiveGenusN) {
  Rng rng(1);
  for (int n = 2; n <= 5; ++n) {
    const PencilConfig cfg = random_config(n, rng);
    for (int k = 0; k < 10; ++k) {
      const CotangentSample s = sample_cotangent(cfg, rng);
      const auto roots = fiber_roots(cfg, tangent_frame(cfg, s.point), s);
      const HyperellipticData c = fiber_curve(cfg, roots);
      EXPECT_EQ(c.genus, n);
      EXPECT_EQ(static_cast<int>(c.branch.size()), 2 * n + 2);
    }
  }
}

TEST(RiemannHurwitz, Examples) {
  EXPECT_EQ(riemann_hurwitz_genus(2, 4), 5);
  EXPECT_EQ(riemann_hurwitz_genus(0, 8), 3);
  EXPECT_EQ(riemann_hurwitz_genus(0, 6), 2);
  EXPECT_EQ(riemann_hurwitz_genus(3, 0), 5);  // etale double cover of genus 3
  EXPECT_EQ(kind_of([] { riemann_hurwitz_genus(1, 3); }), ErrorKind::Parity);
}

TEST(RiemannHurwitz, MatchesHyperellipticCount) {
  // a double cover of P^1 branched at b points is hyperelliptic of genus b/2 - 1
  for (int b = 4; b <= 20; b += 2) EXPECT_EQ(riemann_hurwitz_genus(0, b), hyperelliptic_genus(b));
}

TEST(RiemannHurwitz, CompositionIsConsistent) {
  // C_w -> C -> P^1: Euler characteristics multiply through the tower
  const int g_c = riemann_hurwitz_genus(0, 6);
  const int g_w = riemann_hurwitz_genus(g_c, 4);
  const int ramification = 2 * g_w - 2 + 4 * 2;
  EXPECT_EQ(ramification, 16);
  // Gamma = C_w / (fixed point free involution): 2 g_w - 2 = 2 (2 g_gamma - 2)
  EXPECT_EQ(riemann_hurwitz_genus(3, 0), g_w);
}

TEST(Genus2Picture, GeneraAndDimensions) {
  const PencilConfig cfg = integer_config(3);
  const Genus2Picture d = genus2_picture(cfg.mu, Complex(7.0, 1.0), Complex(-2.0, 0.5));
  EXPECT_EQ(d.genus_c, 2);
  EXPECT_EQ(d.genus_c_omega, 5);
  EXPECT_EQ(d.genus_gamma, 3);
  EXPECT_EQ(d.prym_dim, 3);
  EXPECT_EQ(d.jacobian_gamma_dim, 3);
  EXPECT_EQ(d.gamma_branch.size(), 8u);
  EXPECT_EQ(d.composite_ramification, 16);
}

TEST(Genus2Picture, Degenerate) {
  const PencilConfig cfg = integer_config(3);
  EXPECT_EQ(kind_of([&] { genus2_picture(cfg.mu, 7.0, 7.0); }), ErrorKind::DegenerateOmega);
  EXPECT_EQ(kind_of([&] { genus2_picture(cfg.mu, 2.0, 7.0); }), ErrorKind::DegenerateOmega);
  EXPECT_EQ(kind_of([&] { genus2_picture(integer_config(2).mu, 9.0, 7.0); }), ErrorKind::InvalidConfig);
}
