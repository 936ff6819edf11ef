#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pencil {

/// Failure categories raised by the library. Most of them mark a sample that
/// is not in general position; callers that sweep random samples catch those
/// and resample.
enum class ErrorKind {
  DegreeZero,
  NoConverge,
  SizeMismatch,
  DegeneratePencil,
  SingularA,
  InvalidConfig,
  InvalidPoint,
  Unlucky,
  SingularPoint,
  ZeroCovector,
  ZeroRestriction,
  DegenerateDrop,
  GaugeError,
  BadIncidence,
  DomainError,
  BranchLocus,
  RankDeficient,
  StepTooLarge,
  StepRejected,
  OffQuadric,
  NoWitness,
  SingularCurve,
  Parity,
  DegenerateOmega,
};

std::string_view to_string(ErrorKind kind);

class PencilError : public std::runtime_error {
 public:
  PencilError(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// True for the error kinds that only say "this random sample is special".
bool is_degenerate_sample(ErrorKind kind);

}  // namespace pencil
