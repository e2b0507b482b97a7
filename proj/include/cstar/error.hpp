#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cstar {

enum class ErrorCode {
  NotHermitian,
  Singular,
  NoConvergence,
  DimensionMismatch,
  NotSubspace,
  NotTwoSided,
  NotProper,
  BudgetExceeded,
  NotRealAlgebra,
  SingularResolvent,
  Overflow,
  NotContractive,
  NotPositive,
  NotNormal,
  NonAbelian,
  WitnessNotFound,
  NotUnitVector,
  NotUnital,
  NotNormalized,
  AlgebraMismatch,
  LevelOutOfRange,
  InvalidArgument,
  MalformedInput,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; the code is the
// stable, machine-readable part and what() carries context for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cstar
