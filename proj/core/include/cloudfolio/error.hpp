#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cloudfolio {

enum class ErrorCode {
  kMissingFile,
  kSchemaViolation,
  kDanglingReference,
  kDuplicateEntry,
  kNoPrice,
  kEmptyTrace,
  kMalformedRow,
  kNoFeasibleType,
  kEmptyDistribution,
  kSingleClass,
  kH1smBeyondOneHour,
  kDivisionGuard,
  kInfeasible,
  kMixedHorizons,
  kHorizonTooLarge,
  kInvalidArgument,
  kInvariantViolation,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this exception; code() is the
// stable machine-readable part, what() carries context (file, line, field).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cloudfolio
