#pragma once

#include <string>

#include "json.hpp"
#include "snrkit/bootstrap.hpp"
#include "snrkit/diagnostics.hpp"
#include "snrkit/error.hpp"

namespace snrkit {

using Json = nlohmann::ordered_json;

Json to_json(const SelfSkill& s);
Json to_json(const FitReport& fit);
Json to_json(const RecalibrationMap& map);
Json to_json(const SpreadErrorTerms& terms);

/// Diagnostic fields of the analyze report. Quantities that do not apply to
/// the archive type, or that failed, are null; failures are listed with
/// their error codes.
Json to_json(const DiagnosticsReport& report);

/// point estimate, replicate counts, failures and the requested quantiles.
Json to_json(const BootstrapDistribution& dist, std::span<const double> probs);

/// {"error": {"code": ..., "message": ...}}
Json error_json(ErrorCode code, const std::string& message);
Json error_json(const std::vector<DiagnosticFailure>& failures, const std::string& message);

}  // namespace snrkit
