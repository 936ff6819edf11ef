#include "pencil/error.hpp"

namespace pencil {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegreeZero: return "DegreeZero";
    case ErrorKind::NoConverge: return "NoConverge";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::DegeneratePencil: return "DegeneratePencil";
    case ErrorKind::SingularA: return "SingularA";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::InvalidPoint: return "InvalidPoint";
    case ErrorKind::Unlucky: return "Unlucky";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::ZeroCovector: return "ZeroCovector";
    case ErrorKind::ZeroRestriction: return "ZeroRestriction";
    case ErrorKind::DegenerateDrop: return "DegenerateDrop";
    case ErrorKind::GaugeError: return "GaugeError";
    case ErrorKind::BadIncidence: return "BadIncidence";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::BranchLocus: return "BranchLocus";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::StepRejected: return "StepRejected";
    case ErrorKind::OffQuadric: return "OffQuadric";
    case ErrorKind::NoWitness: return "NoWitness";
    case ErrorKind::SingularCurve: return "SingularCurve";
    case ErrorKind::Parity: return "Parity";
    case ErrorKind::DegenerateOmega: return "DegenerateOmega";
  }
  return "Unknown";
}

bool is_degenerate_sample(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegeneratePencil:
    case ErrorKind::SingularA:
    case ErrorKind::Unlucky:
    case ErrorKind::SingularPoint:
    case ErrorKind::ZeroRestriction:
    case ErrorKind::DegenerateDrop:
    case ErrorKind::BadIncidence:
    case ErrorKind::BranchLocus:
    case ErrorKind::RankDeficient:
    case ErrorKind::NoConverge:
      return true;
    default:
      return false;
  }
}

}  // namespace pencil
