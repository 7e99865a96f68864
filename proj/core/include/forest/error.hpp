#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace forest {

enum class ErrorCode {
  // network validation
  DuplicateNode,
  UnknownEndpoint,
  UnknownNode,
  NonPositiveConductance,
  Disconnected,
  EmptyFuseSet,
  InvalidBoundary,
  InvalidInjection,
  // enumeration
  TooLarge,
  EmptyRootSet,
  InvalidForest,
  // samplers and estimators
  WalkBudgetExceeded,
  InvalidSampleCount,
  // theorem engines
  QTooSmall,
  TargetIsRoot,
  SameNode,
  InconsistentCurrentMatrix,
  // markov
  StartInR,
  BadNodeRole,
  NotArborescence,
  BadDistribution,
  // numerics
  SingularSystem,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Numeric failures are internal errors (exit code 3 in the CLI); every other
/// code is a validation error of the caller's input.
constexpr bool is_numeric_failure(ErrorCode code) noexcept {
  return code == ErrorCode::SingularSystem ||
         code == ErrorCode::WalkBudgetExceeded;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& detail);

}  // namespace forest
