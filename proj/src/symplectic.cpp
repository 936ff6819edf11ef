#include "pencil/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <Eigen/QR>

#include "pencil/linalg.hpp"
#include "pencil/spectral.hpp"

namespace pencil {

namespace {

Complex value_of(const Complex& z) { return z; }
Complex value_of(const Dual& z) { return z.v; }

Complex root_on(const Complex&, Complex root) { return root; }
Dual root_on(const Dual& a, Complex root) { return sqrt_on_branch(a, root); }

Complex pick_root(Complex square, int sign, const std::optional<Complex>& ref) {
  const Complex r = std::sqrt(square);
  if (ref) return std::abs(r - *ref) <= std::abs(-r - *ref) ? r : -r;
  return sign >= 0 ? r : -r;
}

template <class T>
std::vector<T> embed_generic(const PencilConfig& cfg, const Chart& chart, const std::vector<std::size_t>& free,
                             const std::vector<T>& u, const std::optional<BranchReference>& ref) {
  const std::vector<Complex>& mu = cfg.mu;
  T s1 = T(Complex(1.0));
  T s2 = T(mu[chart.a]);
  for (std::size_t k = 0; k < free.size(); ++k) {
    const T sq = u[k] * u[k];
    s1 = s1 + sq;
    s2 = s2 + T(mu[free[k]]) * sq;
  }
  const Complex mb = mu[chart.b];
  const Complex mc = mu[chart.c];
  const T xb2 = (T(mc) * s1 - s2) / T(mb - mc);
  const T xc2 = (T(mb) * s1 - s2) / T(mc - mb);
  if (std::abs(value_of(xb2)) < kBranchLocusTol || std::abs(value_of(xc2)) < kBranchLocusTol)
    throw PencilError(ErrorKind::BranchLocus, "chart meets the branch locus");

  std::vector<T> x(cfg.ambient_dim(), T(Complex(0.0)));
  x[chart.a] = T(Complex(1.0));
  for (std::size_t k = 0; k < free.size(); ++k) x[free[k]] = u[k];
  const std::optional<Complex> rb = ref ? std::optional<Complex>(ref->xb) : std::nullopt;
  const std::optional<Complex> rc = ref ? std::optional<Complex>(ref->xc) : std::nullopt;
  x[chart.b] = root_on(xb2, pick_root(value_of(xb2), chart.branch[0], rb));
  x[chart.c] = root_on(xc2, pick_root(value_of(xc2), chart.branch[1], rc));
  return x;
}

// xi_free = p, xi_b = xi_c = 0, and xi_a fixed by Euler orthogonality.
template <class T>
std::vector<T> slice_covector(const PencilConfig& cfg, const Chart& chart, const std::vector<std::size_t>& free,
                              const std::vector<T>& u, const std::vector<T>& p) {
  std::vector<T> xi(cfg.ambient_dim(), T(Complex(0.0)));
  T euler = T(Complex(0.0));
  for (std::size_t k = 0; k < free.size(); ++k) {
    xi[free[k]] = p[k];
    euler = euler + u[k] * p[k];
  }
  xi[chart.a] = -euler;
  return xi;
}

template <class T>
std::vector<T> phi_generic(const PencilConfig& cfg, const Chart& chart, const std::vector<T>& u,
                           const std::vector<T>& p, const std::vector<std::size_t>& indices,
                           const std::optional<BranchReference>& ref) {
  const std::vector<std::size_t> free = chart.free_indices(cfg);
  const std::vector<T> x = embed_generic<T>(cfg, chart, free, u, ref);
  const std::vector<T> xi = slice_covector<T>(cfg, chart, free, u, p);
  const std::vector<T> all =
      s_values_bracket<T>(std::span<const Complex>(cfg.mu), std::span<const T>(x), std::span<const T>(xi));
  std::vector<T> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(all.at(i));
  return out;
}

void check_state(const PencilConfig& cfg, const ChartState& state) {
  if (state.u.size() != cfg.n || state.p.size() != cfg.n)
    throw PencilError(ErrorKind::SizeMismatch, "chart state has wrong size");
}

void check_indices(const PencilConfig& cfg, const std::vector<std::size_t>& indices) {
  for (std::size_t i : indices)
    if (i >= cfg.ambient_dim()) throw PencilError(ErrorKind::DomainError, "s-index out of range");
}

std::vector<Complex> to_std(const Eigen::VectorXcd& v) { return {v.data(), v.data() + v.size()}; }

BranchReference reference_at(const PencilConfig& cfg, const Chart& chart, const Eigen::VectorXcd& u,
                             const std::optional<BranchReference>& ref) {
  const AmbientPoint pt = chart_embed(cfg, chart, u, ref);
  return {pt.x(static_cast<Eigen::Index>(chart.b)), pt.x(static_cast<Eigen::Index>(chart.c))};
}

}  // namespace

std::vector<std::size_t> Chart::free_indices(const PencilConfig& cfg) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cfg.ambient_dim(); ++i)
    if (i != a && i != b && i != c) out.push_back(i);
  return out;
}

Chart make_chart(const PencilConfig& cfg, std::size_t a, std::size_t b, std::size_t c, std::array<int, 2> branch) {
  const std::size_t dim = cfg.ambient_dim();
  if (a >= dim || b >= dim || c >= dim || a == b || a == c || b == c)
    throw PencilError(ErrorKind::InvalidConfig, "chart indices must be distinct and in range");
  if (std::abs(branch[0]) != 1 || std::abs(branch[1]) != 1)
    throw PencilError(ErrorKind::InvalidConfig, "branch signs must be +1 or -1");
  return Chart{a, b, c, branch};
}

AmbientPoint chart_embed(const PencilConfig& cfg, const Chart& chart, const Eigen::VectorXcd& u,
                         const std::optional<BranchReference>& ref) {
  if (u.size() != cfg.n) throw PencilError(ErrorKind::SizeMismatch, "chart coordinates have wrong size");
  const std::vector<Complex> x = embed_generic<Complex>(cfg, chart, chart.free_indices(cfg), to_std(u), ref);
  return AmbientPoint{Eigen::Map<const Eigen::VectorXcd>(x.data(), static_cast<Eigen::Index>(x.size()))};
}

Eigen::MatrixXcd chart_jacobian(const PencilConfig& cfg, const Chart& chart, const Eigen::VectorXcd& u) {
  const AmbientPoint pt = chart_embed(cfg, chart, u);
  const std::vector<std::size_t> free = chart.free_indices(cfg);
  const auto dim = static_cast<Eigen::Index>(cfg.ambient_dim());
  const std::vector<Complex>& mu = cfg.mu;
  const Complex mb = mu[chart.b], mc = mu[chart.c];
  const Complex xb = pt.x(static_cast<Eigen::Index>(chart.b));
  const Complex xc = pt.x(static_cast<Eigen::Index>(chart.c));
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(dim, cfg.n);
  for (int k = 0; k < cfg.n; ++k) {
    const Complex mk = mu[free[static_cast<std::size_t>(k)]];
    j(static_cast<Eigen::Index>(free[static_cast<std::size_t>(k)]), k) = 1.0;
    // d(x_b^2)/du_k = 2 u_k (mu_c - mu_k) / (mu_b - mu_c), and x_b' = (x_b^2)' / (2 x_b)
    j(static_cast<Eigen::Index>(chart.b), k) = u(k) * (mc - mk) / ((mb - mc) * xb);
    j(static_cast<Eigen::Index>(chart.c), k) = u(k) * (mb - mk) / ((mc - mb) * xc);
  }
  return j;
}

Eigen::VectorXcd chart_coordinates(const Chart& chart, const PencilConfig& cfg, const Eigen::VectorXcd& x) {
  if (x.size() != static_cast<Eigen::Index>(cfg.ambient_dim()))
    throw PencilError(ErrorKind::SizeMismatch, "point has wrong size");
  const Complex xa = x(static_cast<Eigen::Index>(chart.a));
  if (std::abs(xa) <= 1e-12 * x.norm()) throw PencilError(ErrorKind::DomainError, "point is off the chart");
  const std::vector<std::size_t> free = chart.free_indices(cfg);
  Eigen::VectorXcd u(cfg.n);
  for (int k = 0; k < cfg.n; ++k) u(k) = x(static_cast<Eigen::Index>(free[static_cast<std::size_t>(k)])) / xa;
  return u;
}

Chart chart_for_point(const PencilConfig& cfg, const Eigen::VectorXcd& x) {
  if (x.size() != static_cast<Eigen::Index>(cfg.ambient_dim()))
    throw PencilError(ErrorKind::SizeMismatch, "point has wrong size");
  std::vector<std::size_t> order(cfg.ambient_dim());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::abs(x(static_cast<Eigen::Index>(i))) > std::abs(x(static_cast<Eigen::Index>(j)));
  });
  Chart chart = make_chart(cfg, order[0], order[1], order[2]);
  const Complex xa = x(static_cast<Eigen::Index>(chart.a));
  if (xa == 0.0) throw PencilError(ErrorKind::InvalidPoint, "zero vector");
  const Complex yb = x(static_cast<Eigen::Index>(chart.b)) / xa;
  const Complex yc = x(static_cast<Eigen::Index>(chart.c)) / xa;
  chart.branch[0] = std::abs(std::sqrt(yb * yb) - yb) <= std::abs(yb) ? 1 : -1;
  chart.branch[1] = std::abs(std::sqrt(yc * yc) - yc) <= std::abs(yc) ? 1 : -1;
  return chart;
}

ChartState state_from_sample(const PencilConfig& cfg, const Chart& chart, const CotangentSample& sample) {
  const Complex xa = sample.point.x(static_cast<Eigen::Index>(chart.a));
  ChartState st;
  st.u = chart_coordinates(chart, cfg, sample.point.x);
  st.p = chart_jacobian(cfg, chart, st.u).transpose() * (xa * sample.xi);
  return st;
}

CotangentSample ambient_covector(const PencilConfig& cfg, const Chart& chart, const ChartState& state,
                                 CovectorChoice choice, const std::optional<BranchReference>& ref) {
  check_state(cfg, state);
  const AmbientPoint pt = chart_embed(cfg, chart, state.u, ref);
  const Eigen::MatrixXcd j = chart_jacobian(cfg, chart, state.u);
  const auto dim = static_cast<Eigen::Index>(cfg.ambient_dim());
  const int n = cfg.n;
  Eigen::MatrixXcd sys(n + 1, dim);
  sys.topRows(n) = j.transpose();
  sys.row(n) = pt.x.transpose();
  if (numeric_rank(sys) != n + 1) throw PencilError(ErrorKind::RankDeficient, "covector system loses rank");

  if (choice == CovectorChoice::ChartSlice) {
    const std::vector<Complex> xi =
        slice_covector<Complex>(cfg, chart, chart.free_indices(cfg), to_std(state.u), to_std(state.p));
    return CotangentSample{pt, Eigen::Map<const Eigen::VectorXcd>(xi.data(), dim)};
  }
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n + 1);
  rhs.head(n) = state.p;
  return CotangentSample{pt, sys.completeOrthogonalDecomposition().solve(rhs)};
}

std::vector<std::size_t> default_indices(const PencilConfig& cfg) {
  std::vector<std::size_t> out(static_cast<std::size_t>(cfg.n));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

Eigen::VectorXcd phi_chart(const PencilConfig& cfg, const Chart& chart, const ChartState& state,
                           const std::vector<std::size_t>& indices, const std::optional<BranchReference>& ref) {
  check_state(cfg, state);
  check_indices(cfg, indices);
  const std::vector<Complex> v = phi_generic<Complex>(cfg, chart, to_std(state.u), to_std(state.p), indices, ref);
  return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXcd phi_gradient(const PencilConfig& cfg, const Chart& chart, const ChartState& state,
                              const std::vector<std::size_t>& indices, const std::optional<BranchReference>& ref) {
  check_state(cfg, state);
  check_indices(cfg, indices);
  const int n = cfg.n;
  std::vector<Dual> u(static_cast<std::size_t>(n)), p(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    u[static_cast<std::size_t>(k)] = Dual(state.u(k));
    p[static_cast<std::size_t>(k)] = Dual(state.p(k));
  }
  Eigen::MatrixXcd grad(static_cast<Eigen::Index>(indices.size()), 2 * n);
  for (int col = 0; col < 2 * n; ++col) {
    std::vector<Dual>& target = col < n ? u : p;
    const auto k = static_cast<std::size_t>(col < n ? col : col - n);
    target[k].d = 1.0;
    const std::vector<Dual> v = phi_generic<Dual>(cfg, chart, u, p, indices, ref);
    target[k].d = 0.0;
    for (std::size_t r = 0; r < v.size(); ++r) grad(static_cast<Eigen::Index>(r), col) = v[r].d;
  }
  return grad;
}

Eigen::MatrixXcd phi_gradient_fd(const PencilConfig& cfg, const Chart& chart, const ChartState& state,
                                 const std::vector<std::size_t>& indices, double h, double tol) {
  check_state(cfg, state);
  const int n = cfg.n;
  const BranchReference ref = reference_at(cfg, chart, state.u, std::nullopt);
  auto central = [&](int col, double step) {
    ChartState plus = state, minus = state;
    Eigen::VectorXcd& vp = col < n ? plus.u : plus.p;
    Eigen::VectorXcd& vm = col < n ? minus.u : minus.p;
    const int k = col < n ? col : col - n;
    vp(k) += step;
    vm(k) -= step;
    return Eigen::VectorXcd((phi_chart(cfg, chart, plus, indices, ref) - phi_chart(cfg, chart, minus, indices, ref)) /
                            (2.0 * step));
  };
  Eigen::MatrixXcd grad(static_cast<Eigen::Index>(indices.size()), 2 * n);
  Eigen::MatrixXcd coarse(grad.rows(), grad.cols());
  for (int col = 0; col < 2 * n; ++col) {
    const Eigen::VectorXcd d1 = central(col, h);
    const Eigen::VectorXcd d2 = central(col, h / 2.0);
    grad.col(col) = (4.0 * d2 - d1) / 3.0;
    coarse.col(col) = d2;
  }
  const double scale = std::max(1.0, grad.cwiseAbs().maxCoeff());
  const double disagreement = (grad - coarse).cwiseAbs().maxCoeff();
  if (disagreement > tol * scale) {
    std::ostringstream os;
    os << "Richardson disagreement " << disagreement << " at step " << h;
    throw PencilError(ErrorKind::StepTooLarge, os.str());
  }
  return grad;
}

Eigen::VectorXcd chart_gradient(const ChartFunction& f, const ChartState& state) {
  const auto n = static_cast<int>(state.u.size());
  std::vector<Dual> u(static_cast<std::size_t>(n)), p(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    u[static_cast<std::size_t>(k)] = Dual(state.u(k));
    p[static_cast<std::size_t>(k)] = Dual(state.p(k));
  }
  Eigen::VectorXcd grad(2 * n);
  for (int col = 0; col < 2 * n; ++col) {
    std::vector<Dual>& target = col < n ? u : p;
    const auto k = static_cast<std::size_t>(col < n ? col : col - n);
    target[k].d = 1.0;
    grad(col) = f(u, p).d;
    target[k].d = 0.0;
  }
  return grad;
}

Complex bracket_from_gradients(const Eigen::VectorXcd& grad_f, const Eigen::VectorXcd& grad_g) {
  if (grad_f.size() != grad_g.size() || grad_f.size() % 2 != 0)
    throw PencilError(ErrorKind::SizeMismatch, "gradients must have matching even length");
  const Eigen::Index n = grad_f.size() / 2;
  Complex acc = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) acc += grad_f(k) * grad_g(n + k) - grad_f(n + k) * grad_g(k);
  return acc;
}

BracketValue poisson_bracket(const PencilConfig& cfg, const Chart& chart, std::size_t f_index, std::size_t g_index,
                             const ChartState& state) {
  const Eigen::MatrixXcd grad = phi_gradient(cfg, chart, state, {f_index, g_index});
  const Eigen::VectorXcd gf = grad.row(0).transpose();
  const Eigen::VectorXcd gg = grad.row(1).transpose();
  return BracketValue{bracket_from_gradients(gf, gg), gf.norm() * gg.norm()};
}

Eigen::MatrixXcd bracket_matrix(const PencilConfig& cfg, const Chart& chart, const ChartState& state,
                                const std::vector<std::size_t>& indices) {
  const Eigen::MatrixXcd grad = phi_gradient(cfg, chart, state, indices);
  const auto m = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXcd out(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      out(i, j) = bracket_from_gradients(grad.row(i).transpose(), grad.row(j).transpose());
  return out;
}

ChartState sample_chart_state(const PencilConfig& cfg, const Chart& chart, Rng& rng) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    ChartState st{Eigen::VectorXcd(cfg.n), Eigen::VectorXcd(cfg.n)};
    for (int k = 0; k < cfg.n; ++k) {
      st.u(k) = rng.uniform_complex();
      st.p(k) = rng.uniform_complex();
    }
    try {
      const AmbientPoint pt = chart_embed(cfg, chart, st.u);
      if (std::abs(pt.x(static_cast<Eigen::Index>(chart.b))) < kChartDomainTol ||
          std::abs(pt.x(static_cast<Eigen::Index>(chart.c))) < kChartDomainTol)
        continue;
      (void)ambient_covector(cfg, chart, st);
      return st;
    } catch (const PencilError& e) {
      if (e.kind() != ErrorKind::BranchLocus && e.kind() != ErrorKind::RankDeficient) throw;
    }
  }
  throw PencilError(ErrorKind::Unlucky, "no chart state away from the branch locus");
}

// ---------------------------------------------------------------------------

namespace {

struct PhaseVector {
  Eigen::VectorXcd u;
  Eigen::VectorXcd p;
};

PhaseVector field(const PencilConfig& cfg, const Chart& chart, std::size_t h_index, const ChartState& st,
                  const BranchReference& ref) {
  const Eigen::MatrixXcd g = phi_gradient(cfg, chart, st, {h_index}, ref);
  const int n = cfg.n;
  return PhaseVector{g.row(0).segment(n, n).transpose(), -g.row(0).head(n).transpose()};
}

ChartState axpy(const ChartState& st, double h, const PhaseVector& k) {
  return ChartState{st.u + h * k.u, st.p + h * k.p};
}

ChartState rk4_step(const PencilConfig& cfg, const Chart& chart, std::size_t h_index, const ChartState& st,
                    double dt, const BranchReference& ref) {
  const PhaseVector k1 = field(cfg, chart, h_index, st, ref);
  const PhaseVector k2 = field(cfg, chart, h_index, axpy(st, dt / 2.0, k1), ref);
  const PhaseVector k3 = field(cfg, chart, h_index, axpy(st, dt / 2.0, k2), ref);
  const PhaseVector k4 = field(cfg, chart, h_index, axpy(st, dt, k3), ref);
  return ChartState{st.u + (dt / 6.0) * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
                    st.p + (dt / 6.0) * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p)};
}

double state_distance(const ChartState& a, const ChartState& b) {
  const double diff = std::sqrt((a.u - b.u).squaredNorm() + (a.p - b.p).squaredNorm());
  const double size = std::sqrt(a.u.squaredNorm() + a.p.squaredNorm());
  return diff / std::max(1.0, size);
}

}  // namespace

Trajectory hamiltonian_flow(const PencilConfig& cfg, const Chart& chart, std::size_t h_index,
                            const ChartState& start, const FlowOptions& options) {
  check_state(cfg, start);
  check_indices(cfg, {h_index});
  if (options.steps < 0) throw PencilError(ErrorKind::DomainError, "negative step count");
  if (!std::isfinite(options.dt)) throw PencilError(ErrorKind::DomainError, "time step must be finite");

  Trajectory traj;
  traj.recorded = options.record.empty() ? default_indices(cfg) : options.record;
  check_indices(cfg, traj.recorded);

  ChartState st = start;
  BranchReference ref = reference_at(cfg, chart, st.u, std::nullopt);
  traj.rows.push_back(TrajectoryRow{0.0, st.u, st.p, phi_chart(cfg, chart, st, traj.recorded, ref)});

  for (int step = 1; step <= options.steps; ++step) {
    try {
      const ChartState next = rk4_step(cfg, chart, h_index, st, options.dt, ref);
      if (options.richardson_guard) {
        const ChartState mid = rk4_step(cfg, chart, h_index, st, options.dt / 2.0, ref);
        const BranchReference mid_ref = reference_at(cfg, chart, mid.u, ref);
        const ChartState fine = rk4_step(cfg, chart, h_index, mid, options.dt / 2.0, mid_ref);
        const double err = state_distance(next, fine) / 15.0;
        if (!(err <= options.guard_tol)) {
          std::ostringstream os;
          os << "step " << step << ": local error estimate " << err << " exceeds " << options.guard_tol;
          throw PencilError(ErrorKind::StepRejected, os.str());
        }
      }
      ref = reference_at(cfg, chart, next.u, ref);
      (void)ambient_covector(cfg, chart, next, CovectorChoice::ChartSlice, ref);
      st = next;
      traj.rows.push_back(
          TrajectoryRow{step * options.dt, st.u, st.p, phi_chart(cfg, chart, st, traj.recorded, ref)});
    } catch (const PencilError& e) {
      if (e.kind() != ErrorKind::BranchLocus && e.kind() != ErrorKind::RankDeficient &&
          e.kind() != ErrorKind::StepRejected)
        throw;
      traj.status = Trajectory::Status::Aborted;
      traj.reason = e.kind();
      traj.message = e.what();
      break;
    }
  }
  return traj;
}

ChartState unit_speed_state(const PencilConfig& cfg, const Chart& chart, std::size_t h_index,
                            const ChartState& state) {
  const Eigen::MatrixXcd g = phi_gradient(cfg, chart, state, {h_index});
  const int n = cfg.n;
  // p -> c p scales du/ds by c and dp/ds by c^2: solve c^2 |a|^2 + c^4 |b|^2 = 1
  const double a2 = g.row(0).segment(n, n).squaredNorm();
  const double b2 = g.row(0).head(n).squaredNorm();
  if (a2 == 0.0 && b2 == 0.0) throw PencilError(ErrorKind::ZeroCovector, "flow has zero velocity");
  const double c2 = b2 == 0.0 ? 1.0 / a2 : (std::sqrt(a2 * a2 + 4.0 * b2) - a2) / (2.0 * b2);
  return ChartState{state.u, std::sqrt(c2) * state.p};
}

double max_relative_drift(const Trajectory& traj, std::size_t j) {
  if (traj.rows.empty()) return 0.0;
  const auto jj = static_cast<Eigen::Index>(j);
  if (jj >= traj.rows.front().phi.size()) throw PencilError(ErrorKind::DomainError, "component out of range");
  const Complex base = traj.rows.front().phi(jj);
  double denom = std::abs(base);
  if (denom == 0.0) denom = std::max(traj.rows.front().phi.cwiseAbs().maxCoeff(), 1e-300);
  double worst = 0.0;
  for (const TrajectoryRow& row : traj.rows) worst = std::max(worst, std::abs(row.phi(jj) - base) / denom);
  return worst;
}

double max_relative_drift(const Trajectory& traj) {
  double worst = 0.0;
  for (std::size_t j = 0; j < traj.recorded.size(); ++j) worst = std::max(worst, max_relative_drift(traj, j));
  return worst;
}

std::string trajectory_csv_header(const Trajectory& traj) {
  std::ostringstream os;
  os << "s";
  const Eigen::Index n = traj.rows.empty() ? 0 : traj.rows.front().u.size();
  for (Eigen::Index k = 1; k <= n; ++k) os << ",u" << k << "_re,u" << k << "_im";
  for (Eigen::Index k = 1; k <= n; ++k) os << ",p" << k << "_re,p" << k << "_im";
  for (std::size_t i : traj.recorded) os << ",phi_s" << i << "_re,phi_s" << i << "_im";
  return os.str();
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << trajectory_csv_header(traj) << '\n';
  os << std::setprecision(17);
  auto put = [&](const Eigen::VectorXcd& v) {
    for (Eigen::Index k = 0; k < v.size(); ++k) os << ',' << v(k).real() << ',' << v(k).imag();
  };
  for (const TrajectoryRow& row : traj.rows) {
    os << row.s;
    put(row.u);
    put(row.p);
    put(row.phi);
    os << '\n';
  }
}

}  // namespace pencil
