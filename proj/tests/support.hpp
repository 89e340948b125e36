#pragma once

#include <numbers>

#include "kneser/error.hpp"

namespace kneser::test_support {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

// Code of the Error thrown by fn; NumericalGuard doubles as "nothing thrown".
template <class F>
ErrorCode code_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::NumericalGuard;
}

}  // namespace kneser::test_support
