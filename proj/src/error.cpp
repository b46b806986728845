#include "snrkit/error.hpp"

namespace snrkit {

std::string_view code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyEnsemble: return "EmptyEnsemble";
    case ErrorCode::InfiniteScore: return "InfiniteScore";
    case ErrorCode::DegenerateOutcomes: return "DegenerateOutcomes";
    case ErrorCode::ZeroVariancePredictor: return "ZeroVariancePredictor";
    case ErrorCode::DegenerateClimatology: return "DegenerateClimatology";
    case ErrorCode::DegenerateBaseRate: return "DegenerateBaseRate";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::ZeroSignal: return "ZeroSignal";
    case ErrorCode::AllReplicatesFailed: return "AllReplicatesFailed";
    case ErrorCode::EmptyDistribution: return "EmptyDistribution";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace snrkit
