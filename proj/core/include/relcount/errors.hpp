#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace relcount {

enum class ErrorCode {
  kInvalidArgument,
  kDegenerateEntries,
  kPoleAtNonpositiveInteger,
  kParameterPole,
  kNearCutDegradation,
  kDivergent,
  kDegenerateParameters,
  kContinuationFailure,
  kQuadratureFailure,
  kSlowDecay,
  kExplosionGuard,
  kDiagonalZeroEntry,
  kUnstable,
  kIncompleteInventory,
  kMissingConstantEigenfunction,
  kParse,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace relcount
