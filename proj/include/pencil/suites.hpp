#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pencil/json_io.hpp"

namespace pencil {

/// Verification batteries behind `pencil_lab verify`. Each check draws from
/// its own child seed derive_seed(master, k), with k fixed per check, so a
/// check's numbers do not depend on which other checks ran.
enum class Suite { All, Algebra, Geometry, Dynamics, Curves };

Suite parse_suite(const std::string& name);  ///< DomainError on unknown names
std::string to_string(Suite s);

struct SuiteOptions {
  PencilConfig cfg;
  std::uint64_t seed = 0;
  int samples = 100;
  std::map<std::string, double> tolerances = default_tolerances();

  static std::map<std::string, double> default_tolerances();
};

/// DomainError when a key is not one of default_tolerances().
void override_tolerance(SuiteOptions& opts, const std::string& key, double value);

std::vector<CheckRecord> run_algebra(const SuiteOptions& opts);
std::vector<CheckRecord> run_geometry(const SuiteOptions& opts);
std::vector<CheckRecord> run_dynamics(const SuiteOptions& opts);
std::vector<CheckRecord> run_curves(const SuiteOptions& opts);

/// Runs the selected suites and assembles the certificate (wall time
/// included).
Certificate run_verify(const SuiteOptions& opts, Suite suite);

}  // namespace pencil
