#include <gtest/gtest.h>

#include "pencil/kernels.hpp"
#include "pencil/tensor_verify.hpp"

using namespace pencil;

TEST(Kernels, SamplesMatchAcrossExecution) {
  const PencilConfig cfg = integer_config(3);
  const auto a = sample_batch(cfg, 64, 99, Execution::Serial);
  const auto b = sample_batch(cfg, 64, 99, Execution::Parallel);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].point.x, b[i].point.x);
    EXPECT_EQ(a[i].xi, b[i].xi);
  }
}

TEST(Kernels, SampleIsIndependentOfBatchSize) {
  const PencilConfig cfg = integer_config(2);
  const auto small = sample_batch(cfg, 3, 5, Execution::Serial);
  const auto large = sample_batch(cfg, 30, 5, Execution::Parallel);
  for (std::size_t i = 0; i < small.size(); ++i) EXPECT_EQ(small[i].xi, large[i].xi);
}

TEST(Kernels, MatricesMatchAcrossExecution) {
  const PencilConfig cfg = integer_config(4);
  const auto samples = sample_batch(cfg, 50, 7);
  const Eigen::MatrixXcd s1 = s_value_matrix(cfg, samples, Execution::Serial);
  const Eigen::MatrixXcd s2 = s_value_matrix(cfg, samples, Execution::Parallel);
  EXPECT_EQ(s1, s2);
  const auto exps = monomial_exponents(4, 3);
  EXPECT_EQ(monomial_matrix(s1.leftCols(4), exps, Execution::Serial),
            monomial_matrix(s1.leftCols(4), exps, Execution::Parallel));
  EXPECT_EQ(dim_W(cfg, 50, 7, Execution::Serial), dim_W(cfg, 50, 7, Execution::Parallel));
}

TEST(Kernels, MonomialExponents) {
  const auto e = monomial_exponents(3, 2);
  ASSERT_EQ(e.size(), 6u);
  EXPECT_EQ(e.front(), (std::vector<int>{2, 0, 0}));
  EXPECT_EQ(e[1], (std::vector<int>{1, 1, 0}));
  EXPECT_EQ(e.back(), (std::vector<int>{0, 0, 2}));
  for (const auto& v : e) EXPECT_EQ(v[0] + v[1] + v[2], 2);
  EXPECT_EQ(monomial_exponents(1, 5).size(), 1u);
  EXPECT_THROW(monomial_exponents(0, 2), PencilError);
}

TEST(Kernels, MonomialMatrixScaling) {
  Eigen::MatrixXcd v(2, 2);
  v << 2.0, 3.0, 1.0, -1.0;
  const Eigen::MatrixXcd m = monomial_matrix(v, monomial_exponents(2, 2), Execution::Serial);
  EXPECT_NEAR(m.cwiseAbs().maxCoeff(), 1.0, 1e-15);
  for (Eigen::Index c = 0; c < m.cols(); ++c) EXPECT_NEAR(m.col(c).cwiseAbs().maxCoeff(), 1.0, 1e-15);
}

TEST(Kernels, ThreeWaySweepMatchesAcrossExecution) {
  const PencilConfig cfg = integer_config(3);
  const auto a = three_way_sweep(cfg, 20, 3, Execution::Serial);
  const auto b = three_way_sweep(cfg, 20, 3, Execution::Parallel);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].degenerate, b[i].degenerate);
    EXPECT_EQ(a[i].fiber_vs_members, b[i].fiber_vs_members);
    EXPECT_EQ(a[i].roundtrip_covector, b[i].roundtrip_covector);
    if (!a[i].degenerate) EXPECT_LE(a[i].fiber_vs_members, 1e-6);
  }
}

TEST(Kernels, PoissonSweepMatchesAcrossExecution) {
  const PencilConfig cfg = integer_config(2);
  const auto a = poisson_sweep(cfg, 10, 4, Execution::Serial);
  const auto b = poisson_sweep(cfg, 10, 4, Execution::Parallel);
  EXPECT_EQ(a, b);
  for (double v : a) EXPECT_LE(v, 1e-5);
}

TEST(Kernels, ExceptionsPropagateFromParallelRegion) {
  const PencilConfig cfg = integer_config(2);
  EXPECT_THROW(freeness_rank(cfg, 2, {0, 9}, 10, 1, Execution::Parallel), PencilError);
}
