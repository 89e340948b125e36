#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kneser {

enum class ErrorCode {
  InvalidSpec,
  SelfIntersecting,
  DegenerateTangent,
  TooFewSamples,
  OutOfRange,
  RangeMismatch,
  NotWeakHomeomorphism,
  RadiusOutOfRange,
  OutsideDisk,
  BoundViolated,
  NonDini,
  DegenerateBoundary,
  ZeroLowerBound,
  VanishingDerivative,
  SBelowOne,
  NumericalGuard,
};

std::string_view to_string(ErrorCode code);

// Spec errors are caused by bad input; everything else is a tripped
// numerical guard.
bool is_spec_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kneser
