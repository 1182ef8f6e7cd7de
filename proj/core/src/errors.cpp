#include "relcount/errors.hpp"

namespace relcount {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDegenerateEntries: return "DegenerateEntries";
    case ErrorCode::kPoleAtNonpositiveInteger: return "PoleAtNonpositiveInteger";
    case ErrorCode::kParameterPole: return "ParameterPole";
    case ErrorCode::kNearCutDegradation: return "NearCutDegradation";
    case ErrorCode::kDivergent: return "Divergent";
    case ErrorCode::kDegenerateParameters: return "DegenerateParameters";
    case ErrorCode::kContinuationFailure: return "ContinuationFailure";
    case ErrorCode::kQuadratureFailure: return "QuadratureFailure";
    case ErrorCode::kSlowDecay: return "SlowDecay";
    case ErrorCode::kExplosionGuard: return "ExplosionGuard";
    case ErrorCode::kDiagonalZeroEntry: return "DiagonalZeroEntry";
    case ErrorCode::kUnstable: return "Unstable";
    case ErrorCode::kIncompleteInventory: return "IncompleteInventory";
    case ErrorCode::kMissingConstantEigenfunction: return "MissingConstantEigenfunction";
    case ErrorCode::kParse: return "Parse";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

}  // namespace relcount
