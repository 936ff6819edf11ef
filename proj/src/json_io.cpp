#include "pencil/json_io.hpp"

#include <algorithm>

#include "pencil/error.hpp"

namespace pencil {

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw PencilError(ErrorKind::InvalidConfig, "complex values are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json complex_list(std::span<const Complex> v) {
  Json out = Json::array();
  for (const Complex& z : v) out.push_back(complex_to_json(z));
  return out;
}

Json complex_list(const Eigen::VectorXcd& v) {
  return complex_list(std::span<const Complex>(v.data(), static_cast<std::size_t>(v.size())));
}

Eigen::VectorXcd vector_from_json(const Json& j) {
  if (!j.is_array()) throw PencilError(ErrorKind::InvalidConfig, "expected an array of complex values");
  Eigen::VectorXcd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = complex_from_json(j[k]);
  return v;
}

Json config_to_json(const PencilConfig& cfg) { return {{"n", cfg.n}, {"mu", complex_list(cfg.mu)}}; }

PencilConfig config_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("mu") || !j["n"].is_number_integer())
    throw PencilError(ErrorKind::InvalidConfig, "config needs integer n and a mu list");
  const Eigen::VectorXcd mu = vector_from_json(j["mu"]);
  return make_config(j["n"].get<int>(), std::vector<Complex>(mu.data(), mu.data() + mu.size()));
}

Json spectral_value_to_json(const SpectralValue& v) {
  return {{"psi", complex_list(v.psi.coeffs())}, {"s", complex_list(v.s)}, {"roots", complex_list(v.roots)}};
}

Json plane_lift_to_json(const PlaneLift& lift) {
  Json plane = Json::array();
  for (Eigen::Index c = 0; c < lift.plane_basis.cols(); ++c)
    plane.push_back(complex_list(Eigen::VectorXcd(lift.plane_basis.col(c))));
  return {{"lambda", complex_list(lift.lambdas)}, {"plane", plane}};
}

Json report_to_json(const VerificationReport& r) {
  Json ids = Json::array();
  for (const IdentityReport& i : r.identities)
    ids.push_back({{"name", i.name},
                   {"draws", i.draws},
                   {"failures", i.failures},
                   {"max_residual", i.max_residual},
                   {"pass", i.passed()}});
  return {{"suite", r.suite}, {"pass", r.passed()}, {"identities", ids}};
}

Json hyperelliptic_to_json(const HyperellipticData& d) {
  return {{"branch", complex_list(d.branch)}, {"genus", d.genus}};
}

HyperellipticData hyperelliptic_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("branch")) throw PencilError(ErrorKind::InvalidConfig, "missing branch list");
  const Eigen::VectorXcd b = vector_from_json(j["branch"]);
  HyperellipticData d = make_hyperelliptic(std::vector<Complex>(b.data(), b.data() + b.size()));
  if (j.contains("genus") && j["genus"].get<int>() != d.genus)
    throw PencilError(ErrorKind::InvalidConfig, "genus does not match the branch count");
  return d;
}

bool Certificate::pass() const {
  bool ran = false;
  for (const CheckRecord& c : checks) {
    if (c.skipped) continue;
    ran = true;
    if (!c.pass) return false;
  }
  return ran;
}

Json certificate_to_json(const Certificate& c) {
  std::vector<CheckRecord> sorted = c.checks;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
  Json checks = Json::array();
  for (const CheckRecord& r : sorted) {
    Json rec = {{"name", r.name},         {"anchor", r.anchor}, {"samples", r.samples},
                {"max_residual", r.max_residual}, {"tolerance", r.tolerance}, {"pass", r.pass},
                {"skipped", r.skipped}};
    if (!r.reason.empty()) rec["reason"] = r.reason;
    checks.push_back(rec);
  }
  Json tol = Json::object();
  for (const auto& [k, v] : c.tolerances) tol[k] = v;
  return {{"schema", kCertificateSchema},
          {"config", config_to_json(c.cfg)},
          {"seed", c.seed},
          {"suite", c.suite},
          {"tolerances", tol},
          {"checks", checks},
          {"pass", c.pass()},
          {"wall_time_s", c.wall_time_s}};
}

}  // namespace pencil
