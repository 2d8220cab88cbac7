#include "cloudfolio/error.hpp"

namespace cloudfolio {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingFile: return "MISSING_FILE";
    case ErrorCode::kSchemaViolation: return "SCHEMA_VIOLATION";
    case ErrorCode::kDanglingReference: return "DANGLING_REFERENCE";
    case ErrorCode::kDuplicateEntry: return "DUPLICATE_ENTRY";
    case ErrorCode::kNoPrice: return "NO_PRICE";
    case ErrorCode::kEmptyTrace: return "EMPTY_TRACE";
    case ErrorCode::kMalformedRow: return "MALFORMED_ROW";
    case ErrorCode::kNoFeasibleType: return "NO_FEASIBLE_TYPE";
    case ErrorCode::kEmptyDistribution: return "EMPTY_DISTRIBUTION";
    case ErrorCode::kSingleClass: return "SINGLE_CLASS";
    case ErrorCode::kH1smBeyondOneHour: return "H1SM_BEYOND_ONE_HOUR";
    case ErrorCode::kDivisionGuard: return "DIVISION_GUARD";
    case ErrorCode::kInfeasible: return "INFEASIBLE";
    case ErrorCode::kMixedHorizons: return "MIXED_HORIZONS";
    case ErrorCode::kHorizonTooLarge: return "HORIZON_TOO_LARGE";
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kInvariantViolation: return "INVARIANT_VIOLATION";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace cloudfolio
