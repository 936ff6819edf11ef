#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pencil/dual.hpp"
#include "pencil/error.hpp"
#include "pencil/random.hpp"
#include "pencil/variety.hpp"

namespace pencil {

/// Affine chart x_a = 1 on X, with x_b, x_c solved from q1 = q2 = 0 and the
/// remaining n coordinates (ascending index order) free.
struct Chart {
  std::size_t a = 0;
  std::size_t b = 1;
  std::size_t c = 2;
  std::array<int, 2> branch{1, 1};  ///< signs applied to the principal roots of x_b^2, x_c^2

  /// Free ambient indices, in the order of the chart coordinates u.
  std::vector<std::size_t> free_indices(const PencilConfig& cfg) const;
};

Chart make_chart(const PencilConfig& cfg, std::size_t a, std::size_t b, std::size_t c,
                 std::array<int, 2> branch = {1, 1});

/// Canonical coordinates (u, p) on T*X over the chart.
struct ChartState {
  Eigen::VectorXcd u;
  Eigen::VectorXcd p;
};

/// Best-conditioned chart at x: a maximises |x_a|, then b, c take the next
/// two largest coordinates, with signs matching x / x_a.
Chart chart_for_point(const PencilConfig& cfg, const Eigen::VectorXcd& x);

/// Chart coordinates of an ambient sample: u from x / x_a, p = J^T (x_a xi).
ChartState state_from_sample(const PencilConfig& cfg, const Chart& chart, const CotangentSample& sample);

/// Roots to continue from when a path crosses the principal branch cut.
struct BranchReference {
  Complex xb;
  Complex xc;
};

inline constexpr double kBranchLocusTol = 1e-8;
inline constexpr double kChartDomainTol = 1e-4;

/// Point of X over u. With a reference, each square root takes the sign
/// nearest the reference value instead of the chart's stored sign.
/// Throws BranchLocus when |x_b^2| or |x_c^2| < 1e-8.
AmbientPoint chart_embed(const PencilConfig& cfg, const Chart& chart, const Eigen::VectorXcd& u,
                         const std::optional<BranchReference>& ref = std::nullopt);

/// Analytic Jacobian dx/du, (n+3) x n.
Eigen::MatrixXcd chart_jacobian(const PencilConfig& cfg, const Chart& chart, const Eigen::VectorXcd& u);

/// Free coordinates of an ambient point, after rescaling to x_a = 1.
Eigen::VectorXcd chart_coordinates(const Chart& chart, const PencilConfig& cfg, const Eigen::VectorXcd& x);

enum class CovectorChoice {
  MinimumNorm,  ///< least-norm solution of J^T xi = p, <x, xi> = 0
  ChartSlice,   ///< xi_b = xi_c = 0, which gives a holomorphic closed form
};

/// An ambient covector representing (u, p). Any two choices differ by the
/// conormal span, so the s-values agree. Throws RankDeficient at the chart
/// boundary.
CotangentSample ambient_covector(const PencilConfig& cfg, const Chart& chart, const ChartState& state,
                                 CovectorChoice choice = CovectorChoice::MinimumNorm,
                                 const std::optional<BranchReference>& ref = std::nullopt);

/// Default s-basis: indices 0..n-1.
std::vector<std::size_t> default_indices(const PencilConfig& cfg);

/// The chosen s-values at the state.
Eigen::VectorXcd phi_chart(const PencilConfig& cfg, const Chart& chart, const ChartState& state,
                           const std::vector<std::size_t>& indices,
                           const std::optional<BranchReference>& ref = std::nullopt);

/// d phi_i / d(u, p): rows follow `indices`, columns are (u_1..u_n, p_1..p_n).
/// Forward-mode duals, exact up to rounding.
Eigen::MatrixXcd phi_gradient(const PencilConfig& cfg, const Chart& chart, const ChartState& state,
                              const std::vector<std::size_t>& indices,
                              const std::optional<BranchReference>& ref = std::nullopt);

/// Same, by central differences with one Richardson step. Throws
/// StepTooLarge when the two step sizes disagree by more than `tol`
/// relative to the gradient scale.
Eigen::MatrixXcd phi_gradient_fd(const PencilConfig& cfg, const Chart& chart, const ChartState& state,
                                 const std::vector<std::size_t>& indices, double h = 1e-5, double tol = 1e-6);

/// A holomorphic function of the chart coordinates, evaluated on duals.
using ChartFunction = std::function<Dual(const std::vector<Dual>& u, const std::vector<Dual>& p)>;

/// Gradient (d/du, d/dp) of a chart function.
Eigen::VectorXcd chart_gradient(const ChartFunction& f, const ChartState& state);

/// {F, G} = sum_k dF/du_k dG/dp_k - dF/dp_k dG/du_k from gradients.
Complex bracket_from_gradients(const Eigen::VectorXcd& grad_f, const Eigen::VectorXcd& grad_g);

struct BracketValue {
  Complex value{};
  double scale = 0.0;  ///< |grad F| |grad G|; the natural size of the bracket
};

/// {s_i, s_j} at the state.
BracketValue poisson_bracket(const PencilConfig& cfg, const Chart& chart, std::size_t f_index, std::size_t g_index,
                             const ChartState& state);

/// All brackets among the chosen components.
Eigen::MatrixXcd bracket_matrix(const PencilConfig& cfg, const Chart& chart, const ChartState& state,
                                const std::vector<std::size_t>& indices);

/// Random state with |x_b|, |x_c| >= 1e-4 and a full-rank covector system.
ChartState sample_chart_state(const PencilConfig& cfg, const Chart& chart, Rng& rng);

// ---------------------------------------------------------------------------
// Hamiltonian flow
// ---------------------------------------------------------------------------

struct FlowOptions {
  double dt = 1e-3;
  int steps = 1000;
  bool richardson_guard = true;
  double guard_tol = 1e-8;
  std::vector<std::size_t> record;  ///< s-indices recorded per row; empty means 0..n-1
};

struct TrajectoryRow {
  double s = 0.0;
  Eigen::VectorXcd u;
  Eigen::VectorXcd p;
  Eigen::VectorXcd phi;
};

struct Trajectory {
  enum class Status { Completed, Aborted };
  Status status = Status::Completed;
  std::optional<ErrorKind> reason;
  std::string message;
  std::vector<std::size_t> recorded;
  std::vector<TrajectoryRow> rows;
};

/// RK4 for du/ds = dH/dp, dp/ds = -dH/du with H = s_{h_index}, real time s.
/// Square roots follow the previous step. BranchLocus, RankDeficient and
/// StepRejected end the run early with the partial trajectory.
Trajectory hamiltonian_flow(const PencilConfig& cfg, const Chart& chart, std::size_t h_index,
                            const ChartState& start, const FlowOptions& options = {});

/// Rescales p so the flow of s_{h_index} starts with unit phase speed.
/// H is quadratic in p, so p -> c p only reparametrises time along the orbit;
/// this fixes the time unit before comparing drifts across states.
ChartState unit_speed_state(const PencilConfig& cfg, const Chart& chart, std::size_t h_index, const ChartState& state);

/// max_k |phi_j(s_k) - phi_j(0)| / |phi_j(0)|, for recorded component j.
double max_relative_drift(const Trajectory& traj, std::size_t j);

/// Largest drift over all recorded components.
double max_relative_drift(const Trajectory& traj);

/// Header: s, u{k}_re, u{k}_im, ..., p{k}_re, p{k}_im, ..., phi_s{i}_re, phi_s{i}_im, ...
std::string trajectory_csv_header(const Trajectory& traj);
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace pencil
