#include "kneser/error.hpp"

namespace kneser {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::SelfIntersecting: return "SelfIntersecting";
    case ErrorCode::DegenerateTangent: return "DegenerateTangent";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::RangeMismatch: return "RangeMismatch";
    case ErrorCode::NotWeakHomeomorphism: return "NotWeakHomeomorphism";
    case ErrorCode::RadiusOutOfRange: return "RadiusOutOfRange";
    case ErrorCode::OutsideDisk: return "OutsideDisk";
    case ErrorCode::BoundViolated: return "BoundViolated";
    case ErrorCode::NonDini: return "NonDini";
    case ErrorCode::DegenerateBoundary: return "DegenerateBoundary";
    case ErrorCode::ZeroLowerBound: return "ZeroLowerBound";
    case ErrorCode::VanishingDerivative: return "VanishingDerivative";
    case ErrorCode::SBelowOne: return "SBelowOne";
    case ErrorCode::NumericalGuard: return "NumericalGuard";
  }
  return "Unknown";
}

bool is_spec_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec:
    case ErrorCode::SelfIntersecting:
    case ErrorCode::DegenerateTangent:
    case ErrorCode::TooFewSamples:
    case ErrorCode::OutOfRange:
    case ErrorCode::RangeMismatch:
    case ErrorCode::NotWeakHomeomorphism:
      return true;
    default:
      return false;
  }
}

}  // namespace kneser
