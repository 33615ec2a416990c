#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mixroute {

enum class ErrorCode {
  NonPositiveSlope,
  NegativeFreeFlow,
  AsymmetryOutOfRange,
  NoPath,
  NonPositiveDemand,
  BadAlpha,
  BadInstance,
  PathExplosion,
  NegativeFlow,
  UnknownPath,
  EmptyNetwork,
  EmptyDemand,
  DimensionMismatch,
  AlphaOutOfRange,
  HeterogeneousAlpha,
  DomainError,
  InfeasibleLambda,
  UnsupportedTopology,
  GenerationFailed,
  BadKind,
};

std::string_view to_string(ErrorCode code);

/// Every library failure carries a machine-readable code so the CLI can map
/// it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mixroute
