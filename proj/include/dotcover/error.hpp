#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dotcover {

enum class ErrorCode {
  NotPrime,
  DegreeOutOfRange,
  FieldTooLarge,
  ReducibleModulus,
  DivisionByZero,
  DimensionMismatch,
  SpectralMismatch,
  BoundViolated,
  ZeroDirection,
  OriginInSet,
  IdentityViolated,
  BadArity,
  ArityMismatch,
  BadEpsilon,
  NoProperSubfield,
  BudgetExceeded,
  BadSpec,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dotcover
