#pragma once

#include <cstdint>
#include <random>

#include "pencil/scalar.hpp"

namespace pencil {

/// One splitmix64 step: advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

/// Child seed number `index` of `master`. Batch jobs give task k the seed
/// derive_seed(master, k), so results do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Seeded generator. Never shared between tasks; derive a child instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  Rng child(std::uint64_t index) const { return Rng(derive_seed(seed_, index)); }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits (portable across standard libraries).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Real and imaginary parts uniform in [-half_width, half_width].
  Complex uniform_complex(double half_width = 1.0) {
    const double re = uniform(-half_width, half_width);
    const double im = uniform(-half_width, half_width);
    return {re, im};
  }

  /// Uniform integer in [lo, hi].
  long uniform_int(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long>(engine_() % span);
  }

  /// p/q with |p| <= num_bound, 1 <= q <= den_bound, in lowest terms.
  Rational small_rational(long num_bound = 20, long den_bound = 9) {
    Rational r(uniform_int(-num_bound, num_bound), uniform_int(1, den_bound));
    r.canonicalize();
    return r;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace pencil
