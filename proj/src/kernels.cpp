#include "pencil/kernels.hpp"

#include <algorithm>
#include <exception>
#include <numeric>

#include <Eigen/QR>

#include "pencil/error.hpp"
#include "pencil/linalg.hpp"
#include "pencil/spectral.hpp"
#include "pencil/symplectic.hpp"

namespace pencil {

namespace {

// Runs body(i) for i in [0, count). Exceptions inside the parallel region are
// captured and rethrown from the calling thread.
template <class Body>
void for_each_index(std::size_t count, Execution exec, Body&& body) {
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(pencil_kernel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

Eigen::VectorXcd projected_off_conormals(const PencilConfig& cfg, const CotangentSample& s) {
  Eigen::MatrixXcd normals(s.xi.size(), 2);
  normals.col(0) = gradient_q1(s.point.x);
  normals.col(1) = gradient_q2(cfg, s.point.x);
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(normals);
  const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(normals.rows(), 2);
  return s.xi - q * (q.adjoint() * s.xi);
}

}  // namespace

std::vector<CotangentSample> sample_batch(const PencilConfig& cfg, std::size_t count, std::uint64_t master,
                                          Execution exec) {
  std::vector<CotangentSample> out(count);
  for_each_index(count, exec, [&](std::size_t i) {
    Rng rng(derive_seed(master, i));
    out[i] = sample_cotangent(cfg, rng);
  });
  return out;
}

Eigen::MatrixXcd s_value_matrix(const PencilConfig& cfg, std::span<const CotangentSample> samples, Execution exec) {
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(samples.size()), static_cast<Eigen::Index>(cfg.ambient_dim()));
  for_each_index(samples.size(), exec, [&](std::size_t i) {
    const Eigen::VectorXcd v = phi_s(cfg, samples[i]);
    const double norm = v.norm();
    m.row(static_cast<Eigen::Index>(i)) = (norm > 0.0 ? v / norm : v).transpose();
  });
  return m;
}

std::vector<std::vector<int>> monomial_exponents(int vars, int d) {
  if (vars < 1 || d < 0) throw PencilError(ErrorKind::DomainError, "monomials need vars >= 1 and d >= 0");
  std::vector<std::vector<int>> out;
  std::vector<int> e(static_cast<std::size_t>(vars), 0);
  // recursive fill: the first variable takes the largest exponent first
  auto fill = [&](auto&& self, int pos, int left) -> void {
    if (pos == vars - 1) {
      e[static_cast<std::size_t>(pos)] = left;
      out.push_back(e);
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[static_cast<std::size_t>(pos)] = k;
      self(self, pos + 1, left - k);
    }
  };
  fill(fill, 0, d);
  return out;
}

Eigen::MatrixXcd monomial_matrix(const Eigen::MatrixXcd& values, const std::vector<std::vector<int>>& exponents,
                                 Execution exec) {
  const Eigen::Index rows = values.rows();
  const auto cols = static_cast<Eigen::Index>(exponents.size());
  Eigen::MatrixXcd m(rows, cols);
  for_each_index(static_cast<std::size_t>(rows), exec, [&](std::size_t ri) {
    const auto r = static_cast<Eigen::Index>(ri);
    for (Eigen::Index c = 0; c < cols; ++c) {
      Complex acc = 1.0;
      const std::vector<int>& e = exponents[static_cast<std::size_t>(c)];
      for (std::size_t v = 0; v < e.size(); ++v)
        for (int k = 0; k < e[v]; ++k) acc *= values(r, static_cast<Eigen::Index>(v));
      m(r, c) = acc;
    }
    const double scale = m.row(r).cwiseAbs().maxCoeff();
    if (scale > 0.0) m.row(r) /= scale;
  });
  for (Eigen::Index c = 0; c < cols; ++c) {
    const double scale = m.col(c).cwiseAbs().maxCoeff();
    if (scale > 0.0) m.col(c) /= scale;
  }
  return m;
}

std::vector<ThreeWayResult> three_way_sweep(const PencilConfig& cfg, std::size_t count, std::uint64_t master,
                                            Execution exec) {
  std::vector<ThreeWayResult> out(count);
  for_each_index(count, exec, [&](std::size_t i) {
    Rng rng(derive_seed(master, i));
    ThreeWayResult& r = out[i];
    try {
      const CotangentSample s = sample_cotangent(cfg, rng);
      const TangentFrame frame = tangent_frame(cfg, s.point);
      const std::vector<Complex> fiber = fiber_roots(cfg, frame, s);
      const std::vector<Complex> members = singular_members(cfg, frame, s);
      const PlaneLift lift = plane_lift(cfg, frame, s);
      r.fiber_vs_members = match_multisets(fiber, members).max_distance;
      r.fiber_vs_lift = match_multisets(fiber, lift.lambdas).max_distance;
      const PlaneResiduals g = plane_gram_residuals(cfg, lift);
      r.gram_q1 = g.q1;
      r.gram_q2 = g.q2;
      const PlaneImage img = psi_of_plane(cfg, lift);
      r.roundtrip_point = projective_distance(img.point.x, s.point.x);
      r.roundtrip_covector = projective_distance(projected_off_conormals(cfg, s), img.xi);
    } catch (const PencilError& e) {
      if (!is_degenerate_sample(e.kind())) throw;
      r = ThreeWayResult{};
      r.degenerate = true;
    }
  });
  return out;
}

std::vector<double> poisson_sweep(const PencilConfig& cfg, std::size_t count, std::uint64_t master, Execution exec) {
  std::vector<double> out(count, 0.0);
  const Chart chart = make_chart(cfg, 0, 1, 2);
  std::vector<std::size_t> all(cfg.ambient_dim());
  std::iota(all.begin(), all.end(), std::size_t{0});
  for_each_index(count, exec, [&](std::size_t k) {
    Rng rng(derive_seed(master, k));
    const ChartState st = sample_chart_state(cfg, chart, rng);
    const Eigen::MatrixXcd grad = phi_gradient(cfg, chart, st, all);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < grad.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < grad.rows(); ++j) {
        const Eigen::VectorXcd gi = grad.row(i).transpose();
        const Eigen::VectorXcd gj = grad.row(j).transpose();
        const double scale = gi.norm() * gj.norm();
        worst = std::max(worst, std::abs(bracket_from_gradients(gi, gj)) / std::max(scale, 1e-300));
      }
    }
    out[k] = worst;
  });
  return out;
}

}  // namespace pencil
