#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "pencil/linalg.hpp"
#include "pencil/spectral.hpp"
#include "pencil/symplectic.hpp"

using namespace pencil;

namespace {

double rel(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return (a - b).norm() / std::max(1e-300, std::max(a.norm(), b.norm()));
}

}  // namespace

TEST(Chart, EmbedIsOnVariety) {
  Rng rng(1);
  for (int n = 2; n <= 5; ++n) {
    const PencilConfig cfg = random_config(n, rng);
    const Chart chart = make_chart(cfg, 0, 1, 2);
    for (int k = 0; k < 20; ++k) {
      const ChartState st = sample_chart_state(cfg, chart, rng);
      const AmbientPoint pt = chart_embed(cfg, chart, st.u);
      const MembershipResidual r = membership_residual(cfg, pt.x);
      EXPECT_LE(std::max(r.q1, r.q2), 1e-10);
    }
  }
}

TEST(Chart, RoundTripFromSamplePoint) {
  Rng rng(2);
  const PencilConfig cfg = random_config(3, rng);
  const Chart chart = make_chart(cfg, 0, 1, 2);
  for (int k = 0; k < 20; ++k) {
    const AmbientPoint pt = sample_point(cfg, rng);
    const Eigen::VectorXcd u = chart_coordinates(chart, cfg, pt.x);
    const Eigen::VectorXcd scaled = pt.x / pt.x(0);
    const AmbientPoint back = chart_embed(cfg, chart, u, BranchReference{scaled(1), scaled(2)});
    EXPECT_LE((back.x - scaled).norm() / scaled.norm(), 1e-10);
    // the stored signs only differ from the recovered point by sign flips in x_b, x_c
    const AmbientPoint plain = chart_embed(cfg, chart, u);
    for (Eigen::Index i : {Eigen::Index(1), Eigen::Index(2)})
      EXPECT_NEAR(std::abs(plain.x(i)), std::abs(scaled(i)), 1e-10);
  }
}

TEST(Chart, JacobianMatchesFiniteDifferences) {
  Rng rng(3);
  const PencilConfig cfg = random_config(4, rng);
  const Chart chart = make_chart(cfg, 2, 0, 5, {1, -1});
  const ChartState st = sample_chart_state(cfg, chart, rng);
  const Eigen::MatrixXcd j = chart_jacobian(cfg, chart, st.u);
  const AmbientPoint base = chart_embed(cfg, chart, st.u);
  const BranchReference ref{base.x(0), base.x(5)};
  const double h = 1e-6;
  for (int k = 0; k < cfg.n; ++k) {
    Eigen::VectorXcd up = st.u, um = st.u;
    up(k) += h;
    um(k) -= h;
    const Eigen::VectorXcd fd = (chart_embed(cfg, chart, up, ref).x - chart_embed(cfg, chart, um, ref).x) / (2 * h);
    EXPECT_LE((fd - j.col(k)).norm() / std::max(1.0, j.col(k).norm()), 1e-6);
  }
}

TEST(Chart, BranchLocusThrows) {
  const PencilConfig cfg = integer_config(2);
  const Chart chart = make_chart(cfg, 0, 1, 2);
  // x_b^2 = (mu_c S1 - S2) / (mu_b - mu_c) vanishes when 2 S1 = S2, e.g. u = (1, 0) gives S1 = 2, S2 = 3
  // and u = (0, sqrt(1/2)) gives S1 = 3/2, S2 = 2; solve 2(1 + a) = 3a with u = (sqrt(a), 0): a = 2
  Eigen::VectorXcd u(2);
  u << std::sqrt(2.0), 0.0;
  try {
    (void)chart_embed(cfg, chart, u);
    FAIL() << "expected BranchLocus";
  } catch (const PencilError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BranchLocus);
  }
}

TEST(Covector, SatisfiesTheLinearConditions) {
  Rng rng(4);
  for (int n = 2; n <= 4; ++n) {
    const PencilConfig cfg = random_config(n, rng);
    const Chart chart = make_chart(cfg, 0, 1, 2);
    const ChartState st = sample_chart_state(cfg, chart, rng);
    const Eigen::MatrixXcd j = chart_jacobian(cfg, chart, st.u);
    for (CovectorChoice c : {CovectorChoice::MinimumNorm, CovectorChoice::ChartSlice}) {
      const CotangentSample s = ambient_covector(cfg, chart, st, c);
      EXPECT_LE((j.transpose() * s.xi - st.p).norm(), 1e-10 * std::max(1.0, st.p.norm()));
      EXPECT_LE(std::abs(s.point.x.dot(s.xi.conjugate())), 1e-10 * s.point.x.norm() * s.xi.norm());
    }
    const Eigen::VectorXcd a = phi_s(cfg, ambient_covector(cfg, chart, st, CovectorChoice::MinimumNorm));
    const Eigen::VectorXcd b = phi_s(cfg, ambient_covector(cfg, chart, st, CovectorChoice::ChartSlice));
    EXPECT_LE(rel(a, b), 1e-8);
  }
}

TEST(Covector, ZeroMomentumGivesZero) {
  Rng rng(5);
  const PencilConfig cfg = random_config(3, rng);
  const Chart chart = make_chart(cfg, 0, 1, 2);
  ChartState st = sample_chart_state(cfg, chart, rng);
  st.p.setZero();
  EXPECT_EQ(phi_s(cfg, ambient_covector(cfg, chart, st)).norm(), 0.0);
}

TEST(PhiChart, MatchesAmbientAndIsQuadratic) {
  Rng rng(6);
  const PencilConfig cfg = random_config(3, rng);
  const Chart chart = make_chart(cfg, 0, 1, 2);
  const auto idx = default_indices(cfg);
  const ChartState st = sample_chart_state(cfg, chart, rng);
  const Eigen::VectorXcd v = phi_chart(cfg, chart, st, idx);
  const Eigen::VectorXcd amb = phi_s(cfg, ambient_covector(cfg, chart, st));
  EXPECT_LE(rel(v, amb.head(cfg.n)), 1e-9);
  ChartState twice{st.u, 2.0 * st.p};
  EXPECT_LE(rel(phi_chart(cfg, chart, twice, idx), 4.0 * v), 1e-12);

  ChartState moved = st;
  const double du = 1e-5;
  moved.u(0) += du;
  EXPECT_LE(rel(phi_chart(cfg, chart, moved, idx), v), 10 * du);
}

TEST(PhiChart, DualGradientMatchesRichardson) {
  Rng rng(7);
  for (int n = 2; n <= 4; ++n) {
    const PencilConfig cfg = random_config(n, rng);
    const Chart chart = make_chart(cfg, 0, 1, 2);
    const auto idx = default_indices(cfg);
    for (int k = 0; k < 5; ++k) {
      const ChartState st = sample_chart_state(cfg, chart, rng);
      const Eigen::MatrixXcd g = phi_gradient(cfg, chart, st, idx);
      const Eigen::MatrixXcd fd = phi_gradient_fd(cfg, chart, st, idx);
      EXPECT_LE((g - fd).cwiseAbs().maxCoeff() / g.cwiseAbs().maxCoeff(), 1e-7) << "n=" << n;
    }
  }
}

TEST(PhiChart, StepTooLargeIsReported) {
  Rng rng(8);
  const PencilConfig cfg = random_config(3, rng);
  const Chart chart = make_chart(cfg, 0, 1, 2);
  const ChartState st = sample_chart_state(cfg, chart, rng);
  EXPECT_THROW((void)phi_gradient_fd(cfg, chart, st, default_indices(cfg), 0.3, 1e-12), PencilError);
}

TEST(PhiChart, ComponentsAreIndependent) {
  Rng rng(9);
  for (int n = 2; n <= 5; ++n) {
    const PencilConfig cfg = random_config(n, rng);
    const Chart chart = make_chart(cfg, 0, 1, 2);
    const ChartState st = sample_chart_state(cfg, chart, rng);
    EXPECT_EQ(numeric_rank(phi_gradient(cfg, chart, st, default_indices(cfg))), n);
  }
}

TEST(Poisson, CanonicalRelations) {
  Rng rng(10);
  ChartState st{Eigen::VectorXcd::Random(3), Eigen::VectorXcd::Random(3)};
  auto coord = [](bool momentum, std::size_t k) -> ChartFunction {
    return [=](const std::vector<Dual>& u, const std::vector<Dual>& p) { return momentum ? p[k] : u[k]; };
  };
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const Complex up = bracket_from_gradients(chart_gradient(coord(false, i), st), chart_gradient(coord(true, j), st));
      const Complex uu = bracket_from_gradients(chart_gradient(coord(false, i), st), chart_gradient(coord(false, j), st));
      const Complex pp = bracket_from_gradients(chart_gradient(coord(true, i), st), chart_gradient(coord(true, j), st));
      EXPECT_NEAR(std::abs(up - Complex(i == j ? 1.0 : 0.0)), 0.0, 1e-10);
      EXPECT_NEAR(std::abs(uu), 0.0, 1e-10);
      EXPECT_NEAR(std::abs(pp), 0.0, 1e-10);
    }
  }
  (void)rng;
}

TEST(Poisson, SelfBracketVanishes) {
  Rng rng(11);
  const PencilConfig cfg = random_config(3, rng);
  const Chart chart = make_chart(cfg, 0, 1, 2);
  const ChartState st = sample_chart_state(cfg, chart, rng);
  for (std::size_t i = 0; i < cfg.ambient_dim(); ++i)
    EXPECT_LE(std::abs(poisson_bracket(cfg, chart, i, i, st).value), 1e-12);
}

TEST(Poisson, ComponentsCommute) {
  Rng rng(12);
  for (int n = 2; n <= 4; ++n) {
    const PencilConfig cfg = random_config(n, rng);
    const Chart chart = make_chart(cfg, 0, 1, 2);
    for (int k = 0; k < 10; ++k) {
      const ChartState st = sample_chart_state(cfg, chart, rng);
      for (std::size_t i = 0; i < cfg.ambient_dim(); ++i) {
        for (std::size_t j = i + 1; j < cfg.ambient_dim(); ++j) {
          const BracketValue b = poisson_bracket(cfg, chart, i, j, st);
          EXPECT_LE(std::abs(b.value), 1e-5 * b.scale) << "n=" << n << " (" << i << "," << j << ")";
        }
      }
    }
  }
}

TEST(Poisson, NonCommutingFunctionIsDetected) {
  // sanity: the bracket is not identically zero, e.g. {s_0, u_1} = -ds_0/dp_1
  Rng rng(13);
  const PencilConfig cfg = random_config(2, rng);
  const Chart chart = make_chart(cfg, 0, 1, 2);
  const ChartState st = sample_chart_state(cfg, chart, rng);
  const Eigen::MatrixXcd g = phi_gradient(cfg, chart, st, {0});
  Eigen::VectorXcd gu = Eigen::VectorXcd::Zero(4);
  gu(0) = 1.0;
  const Complex b = bracket_from_gradients(g.row(0).transpose(), gu);
  EXPECT_NEAR(std::abs(b + g(0, 2)), 0.0, 1e-14);
  EXPECT_GT(std::abs(b), 1e-6);
}

TEST(Flow, ConservesAllComponents) {
  Rng rng(14);
  for (int n = 2; n <= 3; ++n) {
    const PencilConfig cfg = random_config(n, rng);
    const Chart chart = make_chart(cfg, 0, 1, 2);
    const ChartState st = unit_speed_state(cfg, chart, 0, sample_chart_state(cfg, chart, rng));
    FlowOptions opt;
    opt.steps = 1000;
    const Trajectory t = hamiltonian_flow(cfg, chart, 0, st, opt);
    ASSERT_EQ(t.status, Trajectory::Status::Completed) << t.message;
    ASSERT_EQ(t.rows.size(), 1001u);
    EXPECT_LE(max_relative_drift(t, 0), 1e-8);
    EXPECT_LE(max_relative_drift(t), 1e-6);
  }
}

TEST(Flow, TimeReversal) {
  Rng rng(15);
  const PencilConfig cfg = random_config(3, rng);
  const Chart chart = make_chart(cfg, 0, 1, 2);
  const ChartState st = sample_chart_state(cfg, chart, rng);
  FlowOptions fwd;
  fwd.steps = 200;
  const Trajectory a = hamiltonian_flow(cfg, chart, 1, st, fwd);
  ASSERT_EQ(a.status, Trajectory::Status::Completed);
  FlowOptions back = fwd;
  back.dt = -fwd.dt;
  const Trajectory b = hamiltonian_flow(cfg, chart, 1, ChartState{a.rows.back().u, a.rows.back().p}, back);
  ASSERT_EQ(b.status, Trajectory::Status::Completed);
  EXPECT_LE((b.rows.back().u - st.u).norm() + (b.rows.back().p - st.p).norm(), 1e-7);
}

TEST(Flow, UnitSpeedNormalisation) {
  Rng rng(19);
  const PencilConfig cfg = random_config(3, rng);
  const Chart chart = make_chart(cfg, 0, 1, 2);
  const ChartState st = unit_speed_state(cfg, chart, 2, sample_chart_state(cfg, chart, rng));
  const Eigen::MatrixXcd g = phi_gradient(cfg, chart, st, {2});
  EXPECT_NEAR(g.norm(), 1.0, 1e-12);
}

TEST(Flow, ZeroStepsGivesOneRow) {
  Rng rng(16);
  const PencilConfig cfg = random_config(2, rng);
  const Chart chart = make_chart(cfg, 0, 1, 2);
  FlowOptions opt;
  opt.steps = 0;
  const Trajectory t = hamiltonian_flow(cfg, chart, 0, sample_chart_state(cfg, chart, rng), opt);
  EXPECT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(max_relative_drift(t), 0.0);
}

TEST(Flow, FourthOrderDrift) {
  Rng rng(17);
  const PencilConfig cfg = random_config(2, rng);
  const Chart chart = make_chart(cfg, 0, 1, 2);
  const ChartState st = unit_speed_state(cfg, chart, 0, sample_chart_state(cfg, chart, rng));
  auto drift = [&](double dt) {
    FlowOptions opt;
    opt.dt = dt;
    opt.steps = static_cast<int>(std::lround(1.0 / dt));
    opt.richardson_guard = false;
    const Trajectory t = hamiltonian_flow(cfg, chart, 0, st, opt);
    EXPECT_EQ(t.status, Trajectory::Status::Completed);
    return max_relative_drift(t);
  };
  const double order = std::log2(drift(0.02) / drift(0.01));
  EXPECT_GT(order, 3.5);
  EXPECT_LT(order, 4.5);
}

TEST(Flow, CsvLayout) {
  Rng rng(18);
  const PencilConfig cfg = random_config(2, rng);
  const Chart chart = make_chart(cfg, 0, 1, 2);
  FlowOptions opt;
  opt.steps = 3;
  const Trajectory t = hamiltonian_flow(cfg, chart, 0, sample_chart_state(cfg, chart, rng), opt);
  std::ostringstream os;
  write_trajectory_csv(os, t);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "s,u1_re,u1_im,u2_re,u2_im,p1_re,p1_im,p2_re,p2_im,phi_s0_re,phi_s0_im,phi_s1_re,phi_s1_im");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 4);
}
