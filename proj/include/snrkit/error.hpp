#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace snrkit {

enum class ErrorCode {
  RaggedRows,
  NonFinite,
  TooShort,
  InvalidArgument,
  EmptyEnsemble,
  InfiniteScore,
  DegenerateOutcomes,
  ZeroVariancePredictor,
  DegenerateClimatology,
  DegenerateBaseRate,
  ZeroVariance,
  ZeroSignal,
  AllReplicatesFailed,
  EmptyDistribution,
  ParseError,
  IoError,
};

/// Stable machine-readable name, e.g. "RaggedRows".
std::string_view code_name(ErrorCode code) noexcept;

/// The single exception type thrown by the library. Callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace snrkit
