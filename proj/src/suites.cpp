#include "pencil/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "pencil/error.hpp"
#include "pencil/kernels.hpp"
#include "pencil/symplectic.hpp"

namespace pencil {

namespace {

// child seed indices, one per check
enum SeedSlot : std::uint64_t {
  kSeedDimW = 1,
  kSeedDimWDouble,
  kSeedBasis,
  kSeedFreeness,
  kSeedKernel,
  kSeedExact,
  kSeedThreeWay,
  kSeedGauge,
  kSeedRankBound,
  kSeedDual,
  kSeedWitness,
  kSeedPoisson,
  kSeedFlow,
  kSeedFiberGenus,
  kSeedGenus2,
};

double tol(const SuiteOptions& o, const std::string& key) { return o.tolerances.at(key); }

CheckRecord record(std::string name, std::string anchor, long long samples, double residual, double tolerance) {
  CheckRecord r;
  r.name = std::move(name);
  r.anchor = std::move(anchor);
  r.samples = samples;
  r.max_residual = residual;
  r.tolerance = tolerance;
  r.pass = residual <= tolerance;
  return r;
}

CheckRecord count_record(std::string name, std::string anchor, long long samples, long long measured,
                         long long expected) {
  CheckRecord r = record(std::move(name), std::move(anchor), samples,
                         static_cast<double>(std::llabs(measured - expected)), 0.0);
  if (!r.pass) r.reason = "measured " + std::to_string(measured) + ", expected " + std::to_string(expected);
  return r;
}

CheckRecord failed_record(std::string name, std::string anchor, const PencilError& e) {
  CheckRecord r;
  r.name = std::move(name);
  r.anchor = std::move(anchor);
  r.pass = false;
  r.max_residual = std::numeric_limits<double>::infinity();
  r.reason = std::string(to_string(e.kind())) + ": " + e.what();
  return r;
}

double rel_diff(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-300});
}

// The config as an exact pencil when every mu is real (doubles are exact
// binary rationals); otherwise a random rational pencil of the same n.
ExactPencilConfig exact_counterpart(const PencilConfig& cfg, Rng& rng, std::string& note) {
  const bool real = std::all_of(cfg.mu.begin(), cfg.mu.end(), [](const Complex& m) { return m.imag() == 0.0; });
  if (!real) {
    note = "non-real mu; exact identities run on a random rational pencil with the same n";
    return random_exact_config(cfg.n, rng);
  }
  std::vector<Rational> mu;
  for (const Complex& m : cfg.mu) mu.emplace_back(m.real());
  return make_exact_config(cfg.n, std::move(mu));
}

}  // namespace

Suite parse_suite(const std::string& name) {
  if (name == "all") return Suite::All;
  if (name == "algebra") return Suite::Algebra;
  if (name == "geometry") return Suite::Geometry;
  if (name == "dynamics") return Suite::Dynamics;
  if (name == "curves") return Suite::Curves;
  throw PencilError(ErrorKind::DomainError, "unknown suite '" + name + "'");
}

std::string to_string(Suite s) {
  switch (s) {
    case Suite::All: return "all";
    case Suite::Algebra: return "algebra";
    case Suite::Geometry: return "geometry";
    case Suite::Dynamics: return "dynamics";
    case Suite::Curves: return "curves";
  }
  return "?";
}

std::map<std::string, double> SuiteOptions::default_tolerances() {
  return {{"rank", kRankTol},        {"roots", 1e-6},   {"gram", 1e-8},        {"roundtrip", 1e-6},
          {"gauge", 1e-8},           {"homogeneity", 1e-10}, {"rescaling", 1e-12}, {"bracket", 1e-5},
          {"drift", 1e-6},           {"order", 0.5},    {"dual", 1e-8},        {"degenerate_rate", 0.05}};
}

void override_tolerance(SuiteOptions& opts, const std::string& key, double value) {
  auto it = opts.tolerances.find(key);
  if (it == opts.tolerances.end()) throw PencilError(ErrorKind::DomainError, "unknown tolerance '" + key + "'");
  if (!(value >= 0.0)) throw PencilError(ErrorKind::DomainError, "tolerances must be non-negative");
  it->second = value;
}

std::vector<CheckRecord> run_algebra(const SuiteOptions& o) {
  const PencilConfig& cfg = o.cfg;
  const int n = cfg.n;
  std::vector<CheckRecord> out;

  const int r1 = dim_W(cfg, o.samples, derive_seed(o.seed, kSeedDimW));
  const int r2 = dim_W(cfg, 2 * o.samples, derive_seed(o.seed, kSeedDimWDouble));
  out.push_back(count_record("dim_W", "the s-values span an n-dimensional space", o.samples, r1, n));
  out.push_back(count_record("dim_W_doubled", "rank stable when the sample count doubles", 2 * o.samples, r2, n));

  const BasisCheck basis = any_n_basis_check(cfg, o.samples, derive_seed(o.seed, kSeedBasis));
  out.push_back(count_record("any_n_basis", "every n of the s_i form a basis", basis.subsets_checked,
                             static_cast<long long>(basis.failures.size()), 0));

  std::vector<std::size_t> first(static_cast<std::size_t>(n));
  std::iota(first.begin(), first.end(), std::size_t{0});
  for (int d = 1; d <= 4; ++d) {
    const long long expected = binomial(n + d - 1, d);
    const int samples = static_cast<int>(4 * expected + 20);
    const int rank = freeness_rank(cfg, d, first, samples, derive_seed(o.seed, kSeedFreeness * 100 + d));
    out.push_back(count_record("freeness_d" + std::to_string(d), "degree-d monomials in s_0..s_{n-1} are independent",
                               samples, rank, expected));
  }

  out.push_back(count_record("restriction_kernel", "on x_0 = xi_0 = 0 only s_0 dies", o.samples,
                             restriction_kernel_rank(cfg, o.samples, derive_seed(o.seed, kSeedKernel)), n - 1));

  Rng rng(derive_seed(o.seed, kSeedExact));
  std::string note;
  const ExactPencilConfig exact = exact_counterpart(cfg, rng, note);
  for (const VerificationReport& rep :
       {restriction_identity_check(exact, rng), bilinear_defect_identity_check(exact, rng),
        s0_pushforward_identity(exact, rng)}) {
    for (const IdentityReport& id : rep.identities) {
      CheckRecord r = record("exact_" + rep.suite + "_" + id.name, "exact polynomial identity over Q", id.draws,
                             id.max_residual, 0.0);
      r.pass = id.passed();
      r.reason = note;
      out.push_back(r);
    }
  }
  return out;
}

std::vector<CheckRecord> run_geometry(const SuiteOptions& o) {
  const PencilConfig& cfg = o.cfg;
  std::vector<CheckRecord> out;

  const auto sweep = three_way_sweep(cfg, static_cast<std::size_t>(o.samples), derive_seed(o.seed, kSeedThreeWay));
  double roots = 0.0, gram = 0.0, trip = 0.0;
  long long degenerate = 0;
  for (const ThreeWayResult& r : sweep) {
    if (r.degenerate) {
      ++degenerate;
      continue;
    }
    roots = std::max({roots, r.fiber_vs_members, r.fiber_vs_lift});
    gram = std::max({gram, r.gram_q1, r.gram_q2});
    trip = std::max({trip, r.roundtrip_point, r.roundtrip_covector});
  }
  const auto good = static_cast<long long>(sweep.size()) - degenerate;
  out.push_back(record("three_way_roots", "fiber roots = singular members = lift parameters", good, roots,
                       tol(o, "roots")));
  out.push_back(record("degenerate_rate", "generic samples dominate", static_cast<long long>(sweep.size()),
                       static_cast<double>(degenerate) / static_cast<double>(std::max<std::size_t>(sweep.size(), 1)),
                       tol(o, "degenerate_rate")));
  out.back().pass = out.back().max_residual < tol(o, "degenerate_rate");
  out.push_back(record("plane_gram", "lifted planes are isotropic for Q1 and Q2", good, gram, tol(o, "gram")));
  out.push_back(record("plane_roundtrip", "the lifted plane projects back to (x, xi)", good, trip,
                       tol(o, "roundtrip")));

  Rng rng(derive_seed(o.seed, kSeedGauge));
  double gauge = 0.0, homog = 0.0, rescale = 0.0;
  for (int k = 0; k < o.samples; ++k) {
    const CotangentSample s = sample_cotangent(cfg, rng);
    const Eigen::VectorXcd base = phi_s(cfg, s);
    const Complex a = rng.uniform_complex(), b = rng.uniform_complex(), c = rng.uniform_complex(2.0);
    gauge = std::max(gauge, rel_diff(phi_s(cfg, {s.point, s.xi + a * gradient_q1(s.point.x) +
                                                               b * gradient_q2(cfg, s.point.x)}),
                                     base));
    homog = std::max(homog, rel_diff(phi_s(cfg, {s.point, c * s.xi}), c * c * base));
    rescale = std::max(rescale, rel_diff(phi_s(cfg, {AmbientPoint{c * s.point.x}, s.xi / c}), base));
  }
  out.push_back(record("conormal_gauge", "Phi is blind to the conormal directions", o.samples, gauge, tol(o, "gauge")));
  out.push_back(record("homogeneity", "Phi(c v) = c^2 Phi(v)", o.samples, homog, tol(o, "homogeneity")));
  out.push_back(record("point_rescaling", "Phi(c x, xi / c) = Phi(x, xi)", o.samples, rescale, tol(o, "rescaling")));

  Rng rb(derive_seed(o.seed, kSeedRankBound));
  long long members = 0, failures = 0;
  for (int k = 0; k < o.samples; ++k) {
    const AmbientPoint p = sample_point(cfg, rb);
    std::vector<PencilMember> ms = {PencilMember::q1(), PencilMember::q2(), PencilMember::at(rb.uniform_complex())};
    for (const Complex& m : cfg.mu) ms.push_back(PencilMember::at(m));
    for (const PencilMember& m : ms) {
      ++members;
      failures += !rank_bound_check(cfg, p, m);
    }
  }
  out.push_back(count_record("rank_bound", "every member's tangent hessian has rank >= n-1", members, failures, 0));

  const QuadricConfig q = branch_quadric(cfg);
  Rng rd(derive_seed(o.seed, kSeedDual));
  long long disagreements = 0;
  for (int k = 0; k < o.samples; ++k) {
    const Eigen::VectorXcd z = sample_quadric_point(q, rd);
    const Eigen::VectorXcd zeta = k % 2 ? construct_dual_covector(q, z, rd) : sample_quadric_covector(q, z, rd);
    disagreements += !dual_divisor_test(q, z, zeta, tol(o, "dual")).agree();
  }
  out.push_back(count_record("dual_divisor", "h'_q vanishes exactly on tangent hyperplanes", o.samples,
                             disagreements, 0));

  Rng rw(derive_seed(o.seed, kSeedWitness));
  try {
    const BranchWitness w = branch_conormal_witness(cfg, rw);
    CheckRecord r = record("branch_witness", "the conormal of B is off the dual divisor somewhere", w.draws,
                           w.scale > 0.0 ? std::abs(w.value) / w.scale : 0.0, 0.0);
    r.pass = true;
    out.push_back(r);
  } catch (const PencilError& e) {
    out.push_back(failed_record("branch_witness", "the conormal of B is off the dual divisor somewhere", e));
  }
  return out;
}

std::vector<CheckRecord> run_dynamics(const SuiteOptions& o) {
  const PencilConfig& cfg = o.cfg;
  std::vector<CheckRecord> out;
  const int states = std::min(o.samples, 50);
  const auto brackets = poisson_sweep(cfg, static_cast<std::size_t>(states), derive_seed(o.seed, kSeedPoisson));
  out.push_back(record("poisson_commute", "the s_i pairwise Poisson-commute", states,
                       *std::max_element(brackets.begin(), brackets.end()), tol(o, "bracket")));

  const Chart chart = make_chart(cfg, 0, 1, 2);
  Rng rng(derive_seed(o.seed, kSeedFlow));
  const ChartState st = unit_speed_state(cfg, chart, 0, sample_chart_state(cfg, chart, rng));
  FlowOptions opt;
  const Trajectory t = hamiltonian_flow(cfg, chart, 0, st, opt);
  if (t.status == Trajectory::Status::Completed) {
    out.push_back(record("flow_conservation", "the flow of s_0 conserves every component of Phi",
                         static_cast<long long>(t.rows.size()), max_relative_drift(t), tol(o, "drift")));
  } else {
    CheckRecord r = record("flow_conservation", "the flow of s_0 conserves every component of Phi",
                           static_cast<long long>(t.rows.size()), std::numeric_limits<double>::infinity(), 0.0);
    r.reason = "aborted: " + t.message;
    out.push_back(r);
  }

  auto drift = [&](double dt) {
    FlowOptions f;
    f.dt = dt;
    f.steps = static_cast<int>(std::lround(1.0 / dt));
    f.richardson_guard = false;
    const Trajectory tr = hamiltonian_flow(cfg, chart, 0, st, f);
    return tr.status == Trajectory::Status::Completed ? max_relative_drift(tr)
                                                      : std::numeric_limits<double>::quiet_NaN();
  };
  const double order = std::log2(drift(0.02) / drift(0.01));
  CheckRecord r = record("flow_order", "RK4 drift scales as dt^4", 2, std::isfinite(order) ? std::abs(order - 4.0)
                                                                                            : std::numeric_limits<double>::infinity(),
                         tol(o, "order"));
  r.reason = "observed order " + std::to_string(order);
  out.push_back(r);
  return out;
}

std::vector<CheckRecord> run_curves(const SuiteOptions& o) {
  const PencilConfig& cfg = o.cfg;
  std::vector<CheckRecord> out;

  Rng rng(derive_seed(o.seed, kSeedFiberGenus));
  long long used = 0, wrong = 0;
  for (int k = 0; k < o.samples; ++k) {
    try {
      const CotangentSample s = sample_cotangent(cfg, rng);
      const auto roots = fiber_roots(cfg, tangent_frame(cfg, s.point), s);
      const HyperellipticData c = fiber_curve(cfg, roots);
      ++used;
      wrong += c.genus != cfg.n || static_cast<int>(c.branch.size()) != 2 * cfg.n + 2;
    } catch (const PencilError& e) {
      if (!is_degenerate_sample(e.kind()) && e.kind() != ErrorKind::SingularCurve) throw;
    }
  }
  out.push_back(count_record("fiber_curve_genus", "the fiber's hyperelliptic curve has genus n", used, wrong, 0));

  const int rh[3][3] = {{2, 4, 5}, {0, 8, 3}, {0, 6, 2}};
  long long rh_wrong = 0;
  for (const auto& row : rh) rh_wrong += riemann_hurwitz_genus(row[0], row[1]) != row[2];
  out.push_back(count_record("riemann_hurwitz", "double cover genera (2,4)->5, (0,8)->3, (0,6)->2", 3, rh_wrong, 0));

  // the genus 2 picture needs six parameters: use mu when n = 3
  const PencilConfig six = cfg.n == 3 ? cfg : integer_config(3);
  Rng rs(derive_seed(o.seed, kSeedGenus2));
  const Complex p = rs.uniform_complex(10.0), q = rs.uniform_complex(10.0);
  const Genus2Picture d = genus2_picture(six.mu, p, q);
  const long long s2_wrong = (d.genus_c != 2) + (d.genus_c_omega != 5) + (d.genus_gamma != 3) + (d.prym_dim != 3) +
                             (d.jacobian_gamma_dim != 3) + (static_cast<int>(d.gamma_branch.size()) != 8) +
                             (d.composite_ramification != 16);
  CheckRecord s2 = count_record("genus2_picture", "genera (2, 5, 3) and a 3-dimensional Prym", 1, s2_wrong, 0);
  if (cfg.n != 3) s2.reason = "n != 3: run on mu = 0..5";
  out.push_back(s2);

  long long strata = 0, bad = 0;
  for (long long k = 0; k <= 8; ++k)
    for (long long l = -1; l <= k; ++l) {
      if (k == 0 && l == -1) continue;
      const CodimStratum c = codim_stratum(k, l);
      ++strata;
      bad += c.codim < 2 || c.grassmannian_codim - 2 * c.corank != c.codim;
    }
  out.push_back(count_record("codim_strata", "every special stratum has codimension >= 2", strata, bad, 0));
  return out;
}

Certificate run_verify(const SuiteOptions& opts, Suite suite) {
  const auto start = std::chrono::steady_clock::now();
  Certificate c;
  c.cfg = opts.cfg;
  c.seed = opts.seed;
  c.suite = to_string(suite);
  c.tolerances = opts.tolerances;
  auto add = [&](std::vector<CheckRecord> recs) {
    for (CheckRecord& r : recs) c.checks.push_back(std::move(r));
  };
  if (suite == Suite::All || suite == Suite::Algebra) add(run_algebra(opts));
  if (suite == Suite::All || suite == Suite::Geometry) add(run_geometry(opts));
  if (suite == Suite::All || suite == Suite::Dynamics) add(run_dynamics(opts));
  if (suite == Suite::All || suite == Suite::Curves) add(run_curves(opts));
  c.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return c;
}

}  // namespace pencil
