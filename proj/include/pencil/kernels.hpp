#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pencil/random.hpp"
#include "pencil/variety.hpp"

namespace pencil {

/// Batch kernels come in two flavours: a plain loop kept as the reference,
/// and an OpenMP loop over samples. Each sample draws from its own derived
/// seed, so both produce identical output for the same master seed.
enum class Execution { Serial, Parallel };

/// `count` independent cotangent samples; sample i uses derive_seed(master, i).
std::vector<CotangentSample> sample_batch(const PencilConfig& cfg, std::size_t count, std::uint64_t master,
                                          Execution exec = Execution::Parallel);

/// Rows: samples; columns: s_0..s_{n+2}; each row scaled to unit norm.
Eigen::MatrixXcd s_value_matrix(const PencilConfig& cfg, std::span<const CotangentSample> samples,
                                Execution exec = Execution::Parallel);

/// Exponent vectors of all degree-d monomials in `vars` variables, in
/// lexicographic order (first variable's exponent descending).
std::vector<std::vector<int>> monomial_exponents(int vars, int d);

/// Evaluates the monomials at each row of `values`, then rescales every row
/// and every column to unit max-norm (rank is unchanged by either scaling).
Eigen::MatrixXcd monomial_matrix(const Eigen::MatrixXcd& values, const std::vector<std::vector<int>>& exponents,
                                 Execution exec = Execution::Parallel);

/// Per-sample outcome of the three root computations and the plane lift.
struct ThreeWayResult {
  bool degenerate = false;
  double fiber_vs_members = 0.0;
  double fiber_vs_lift = 0.0;
  double gram_q1 = 0.0;
  double gram_q2 = 0.0;
  double roundtrip_point = 0.0;
  double roundtrip_covector = 0.0;
};

/// Draws `count` samples from `master` and runs fiber_roots,
/// singular_members, plane_lift and psi_of_plane on each. A sample counts as
/// degenerate when any stage raises a degenerate-sample error.
std::vector<ThreeWayResult> three_way_sweep(const PencilConfig& cfg, std::size_t count, std::uint64_t master,
                                            Execution exec = Execution::Parallel);

/// max over all pairs i < j of |{s_i, s_j}| / (|grad s_i| |grad s_j|), at
/// `count` random chart states.
std::vector<double> poisson_sweep(const PencilConfig& cfg, std::size_t count, std::uint64_t master,
                                  Execution exec = Execution::Parallel);

}  // namespace pencil
