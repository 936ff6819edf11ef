#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "pencil/curves.hpp"
#include "pencil/spectral.hpp"
#include "pencil/tensor_verify.hpp"

namespace pencil {

using Json = nlohmann::json;

// Complex numbers are [re, im] pairs everywhere.
Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);
Json complex_list(std::span<const Complex> v);
Json complex_list(const Eigen::VectorXcd& v);
Eigen::VectorXcd vector_from_json(const Json& j);

/// {"n": int, "mu": [[re, im], ...]}; parsing validates via make_config.
Json config_to_json(const PencilConfig& cfg);
PencilConfig config_from_json(const Json& j);

/// {"psi": [...], "s": [...], "roots": [...]}
Json spectral_value_to_json(const SpectralValue& v);

/// {"lambda": [...], "plane": [[...], ...]}: plane lists the basis columns.
Json plane_lift_to_json(const PlaneLift& lift);

Json report_to_json(const VerificationReport& r);

/// {"branch": [...], "genus": g}; parsing re-validates the branch points.
Json hyperelliptic_to_json(const HyperellipticData& d);
HyperellipticData hyperelliptic_from_json(const Json& j);

struct CheckRecord {
  std::string name;
  std::string anchor;  ///< the statement the check exercises
  long long samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool skipped = false;
  std::string reason;  ///< why a check was skipped or failed, if known
};

struct Certificate {
  PencilConfig cfg;
  std::uint64_t seed = 0;
  std::string suite;
  std::map<std::string, double> tolerances;
  std::vector<CheckRecord> checks;
  double wall_time_s = 0.0;

  /// Every non-skipped check passed, and at least one ran.
  bool pass() const;
};

inline constexpr int kCertificateSchema = 1;

/// Checks are emitted sorted by name so output does not depend on the order
/// in which they completed.
Json certificate_to_json(const Certificate& c);

}  // namespace pencil
