// pencil_lab: batch driver for the verification suites, the fibration map,
// Hamiltonian flows and the freeness table.
//
// Exit codes: 0 pass, 1 a check failed or a flow aborted, 2 usage error.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pencil/curves.hpp"
#include "pencil/error.hpp"
#include "pencil/json_io.hpp"
#include "pencil/spectral.hpp"
#include "pencil/suites.hpp"
#include "pencil/symplectic.hpp"
#include "pencil/tensor_verify.hpp"

using namespace pencil;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr const char* kCsvHelp = R"(CSV columns (one row per step, header always present):
  s                       flow time
  uK_re, uK_im            chart coordinates, K = 1..n
  pK_re, pK_im            conjugate momenta, K = 1..n
  phi_sJ_re, phi_sJ_im    recorded components s_J (default J = 0..n-1)
Values are written with 17 significant digits. A summary line with the
maximum relative drift per component goes to stderr; an aborted flow keeps
the rows computed so far and reports status=aborted with a reason.)";

// "random", a comma list of reals, or a JSON list of [re, im] pairs.
PencilConfig parse_config(int n, const std::string& mu, std::uint64_t seed) {
  if (mu == "random") {
    Rng rng(derive_seed(seed, 0));
    return random_config(n, rng);
  }
  if (mu.empty()) return integer_config(n);
  std::vector<Complex> values;
  if (mu.front() == '[') {
    const Eigen::VectorXcd v = vector_from_json(Json::parse(mu));
    values.assign(v.data(), v.data() + v.size());
  } else {
    std::stringstream ss(mu);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      double re = 0.0;
      try {
        re = std::stod(item, &used);
      } catch (const std::exception&) {
        throw UsageError("cannot parse mu entry '" + item + "'");
      }
      if (used != item.size()) throw UsageError("cannot parse mu entry '" + item + "'");
      values.emplace_back(re, 0.0);
    }
  }
  return make_config(n, std::move(values));
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream f(out);
  if (!f) throw UsageError("cannot open " + out);
  f << text << '\n';
}

struct Common {
  int n = 3;
  std::string mu = "random";
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, Common& c, int default_n) {
  c.n = default_n;
  cmd->add_option("--n", c.n, "dimension of X (>= 2)")->capture_default_str();
  cmd->add_option("--mu", c.mu, "\"random\", a comma list of reals, or a JSON list of [re, im]")->capture_default_str();
  cmd->add_option("--seed", c.seed, "master seed")->envname("PENCIL_LAB_SEED")->capture_default_str();
}

int cmd_verify(const Common& c, int samples, const std::vector<std::string>& tols, const std::string& suite,
               const std::string& out) {
  SuiteOptions opts;
  opts.cfg = parse_config(c.n, c.mu, c.seed);
  opts.seed = c.seed;
  if (samples < 10) throw UsageError("--samples must be at least 10");
  opts.samples = samples;
  for (const std::string& t : tols) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw UsageError("--tol expects key=value");
    double v = 0.0;
    try {
      v = std::stod(t.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("bad tolerance value in '" + t + "'");
    }
    override_tolerance(opts, t.substr(0, eq), v);
  }
  const Certificate cert = run_verify(opts, parse_suite(suite));
  emit(certificate_to_json(cert).dump(2), out);
  for (const CheckRecord& r : cert.checks)
    if (!r.pass && !r.skipped) std::cerr << "FAIL " << r.name << ": residual " << r.max_residual << " > " << r.tolerance
                                         << (r.reason.empty() ? "" : " (" + r.reason + ")") << '\n';
  return cert.pass() ? kExitPass : kExitFail;
}

int cmd_phi(const Common& c, const std::string& point, const std::string& xi, bool random, double scale,
            bool lift, const std::string& out) {
  const PencilConfig cfg = parse_config(c.n, c.mu, c.seed);
  CotangentSample s;
  if (random || point.empty()) {
    if (!point.empty() || !xi.empty()) throw UsageError("--random excludes --point/--xi");
    Rng rng(derive_seed(c.seed, 1));
    s = sample_cotangent(cfg, rng);
  } else {
    if (xi.empty()) throw UsageError("--point needs --xi");
    const AmbientPoint p = make_point(cfg, vector_from_json(Json::parse(point)));
    s = make_cotangent(cfg, p, vector_from_json(Json::parse(xi)));
  }
  s.xi *= scale;
  Json j = spectral_value_to_json(spectral_value(cfg, s));
  j["point"] = complex_list(s.point.x);
  j["xi"] = complex_list(s.xi);
  if (lift) j["plane_lift"] = plane_lift_to_json(plane_lift(cfg, tangent_frame(cfg, s.point), s));
  emit(j.dump(2), out);
  return kExitPass;
}

int cmd_flow(const Common& c, std::size_t h_index, double dt, int steps, bool guard, bool raw_speed,
             const std::string& out) {
  const PencilConfig cfg = parse_config(c.n, c.mu, c.seed);
  if (h_index >= cfg.ambient_dim()) throw UsageError("--h-index out of range");
  if (steps < 0) throw UsageError("--steps must be non-negative");
  if (!(dt != 0.0)) throw UsageError("--dt must be nonzero");
  const Chart chart = make_chart(cfg, 0, 1, 2);
  Rng rng(derive_seed(c.seed, 2));
  ChartState st = sample_chart_state(cfg, chart, rng);
  if (!raw_speed) st = unit_speed_state(cfg, chart, h_index, st);
  FlowOptions opt;
  opt.dt = dt;
  opt.steps = steps;
  opt.richardson_guard = guard;
  const Trajectory t = hamiltonian_flow(cfg, chart, h_index, st, opt);

  std::ostringstream csv;
  write_trajectory_csv(csv, t);
  if (out.empty() || out == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream f(out);
    if (!f) throw UsageError("cannot open " + out);
    f << csv.str();
  }

  std::ostringstream summary;
  summary << std::setprecision(3) << "status=" << (t.status == Trajectory::Status::Completed ? "completed" : "aborted");
  if (t.reason) summary << " reason=" << to_string(*t.reason) << " message=\"" << t.message << '"';
  summary << " rows=" << t.rows.size() << " max_relative_drift:";
  for (std::size_t j = 0; j < t.recorded.size(); ++j)
    summary << " phi_s" << t.recorded[j] << '=' << max_relative_drift(t, j);
  std::cerr << summary.str() << '\n';
  return t.status == Trajectory::Status::Completed ? kExitPass : kExitFail;
}

int cmd_dims(const Common& c, int dmax, bool json, bool strata, int kmax) {
  const PencilConfig cfg = parse_config(c.n, c.mu, c.seed);
  if (dmax < 1) throw UsageError("--dmax must be at least 1");
  std::vector<std::size_t> basis(static_cast<std::size_t>(cfg.n));
  for (std::size_t i = 0; i < basis.size(); ++i) basis[i] = i;

  bool all = true;
  Json rows = Json::array();
  std::ostringstream text;
  text << std::setw(4) << "d" << std::setw(12) << "expected" << std::setw(12) << "measured" << std::setw(7) << "pass"
       << '\n';
  for (int d = 1; d <= dmax; ++d) {
    const long long expected = binomial(cfg.n + d - 1, d);
    const int rank = freeness_rank(cfg, d, basis, static_cast<int>(4 * expected + 20), derive_seed(c.seed, 100 + d));
    const bool pass = rank == expected;
    all = all && pass;
    rows.push_back({{"d", d}, {"expected", expected}, {"measured", rank}, {"pass", pass}});
    text << std::setw(4) << d << std::setw(12) << expected << std::setw(12) << rank << std::setw(7)
         << (pass ? "yes" : "no") << '\n';
  }
  Json strata_rows = Json::array();
  if (strata) {
    text << '\n' << std::setw(4) << "k" << std::setw(4) << "l" << std::setw(8) << "codim" << '\n';
    for (long long k = 0; k <= kmax; ++k)
      for (long long l = -1; l <= k; ++l) {
        const CodimStratum s = codim_stratum(k, l);
        strata_rows.push_back({{"k", k}, {"l", l}, {"codim", s.codim}});
        text << std::setw(4) << k << std::setw(4) << l << std::setw(8) << s.codim << '\n';
      }
  }
  if (json) {
    Json j = {{"config", config_to_json(cfg)}, {"seed", c.seed}, {"rows", rows}, {"pass", all}};
    if (strata) j["strata"] = strata_rows;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << text.str();
  }
  return all ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pencil_lab: checks for the integrable system on an intersection of two quadrics"};
  app.require_subcommand(1);

  Common vc, pc, fc, dc;

  auto* verify = app.add_subcommand("verify", "run verification suites and print a JSON certificate");
  add_common(verify, vc, 3);
  int samples = 100;
  std::vector<std::string> tols;
  std::string suite = "all", verify_out;
  verify->add_option("--samples", samples, "samples per check")->capture_default_str();
  verify->add_option("--tol", tols, "override a tolerance, key=value (keys: " + [] {
    std::string keys;
    for (const auto& [k, v] : SuiteOptions::default_tolerances()) keys += (keys.empty() ? "" : ", ") + k;
    return keys;
  }() + ")");
  verify->add_option("--suite", suite, "all | algebra | geometry | dynamics | curves")->capture_default_str();
  verify->add_option("--out", verify_out, "write the certificate here instead of stdout");

  auto* phi = app.add_subcommand("phi", "evaluate s-values, Psi and its roots at a cotangent vector");
  add_common(phi, pc, 3);
  std::string point, xi, phi_out;
  bool random = false, lift = false;
  double scale = 1.0;
  phi->add_option("--point", point, "JSON list of [re, im]: a point of X");
  phi->add_option("--xi", xi, "JSON list of [re, im]: an Euler-orthogonal covector");
  phi->add_flag("--random", random, "sample the point and covector from --seed");
  phi->add_option("--scale", scale, "multiply xi by this factor")->capture_default_str();
  phi->add_flag("--lift", lift, "include the isotropic plane lift");
  phi->add_option("--out", phi_out, "output file");

  auto* flow = app.add_subcommand("flow", "integrate the Hamiltonian flow of one s_i and write a CSV trajectory");
  add_common(flow, fc, 2);
  std::size_t h_index = 0;
  double dt = 1e-3;
  int steps = 1000;
  bool no_guard = false, raw_speed = false;
  std::string flow_out;
  flow->add_option("--h-index", h_index, "Hamiltonian s_i")->capture_default_str();
  flow->add_option("--dt", dt, "step size")->capture_default_str();
  flow->add_option("--steps", steps, "number of RK4 steps")->capture_default_str();
  flow->add_flag("--no-guard", no_guard, "disable the step-doubling error guard");
  flow->add_flag("--raw-speed", raw_speed, "skip the unit phase-speed normalisation of the initial state");
  flow->add_option("--out", flow_out, "CSV file (default stdout)");
  flow->footer(kCsvHelp);

  auto* dims = app.add_subcommand("dims", "evaluation ranks of degree-d monomials in n of the s_i");
  add_common(dims, dc, 3);
  int dmax = 4, kmax = 5;
  bool json = false, strata = false;
  dims->add_option("--dmax", dmax, "largest degree")->capture_default_str();
  dims->add_flag("--json", json, "JSON instead of an aligned table");
  dims->add_flag("--strata", strata, "append the (k, l) codimension table");
  dims->add_option("--kmax", kmax, "largest k in the strata table")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*verify) return cmd_verify(vc, samples, tols, suite, verify_out);
    if (*phi) return cmd_phi(pc, point, xi, random, scale, lift, phi_out);
    if (*flow) return cmd_flow(fc, h_index, dt, steps, !no_guard, raw_speed, flow_out);
    if (*dims) return cmd_dims(dc, dmax, json, strata, kmax);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Json::exception& e) {
    std::cerr << "error: bad JSON: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PencilError& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::InvalidConfig:
      case ErrorKind::InvalidPoint:
      case ErrorKind::SizeMismatch:
      case ErrorKind::DomainError:
      case ErrorKind::ZeroCovector:
        return kExitUsage;
      default:
        return kExitFail;
    }
  }
  return kExitUsage;
}
