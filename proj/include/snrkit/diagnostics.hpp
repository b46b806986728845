#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "snrkit/archive.hpp"
#include "snrkit/error.hpp"
#include "snrkit/recalibration.hpp"

namespace snrkit {

/// Self-skill score SSC = mean entropy / entropy of the climatology, kept with
/// its operands so reports can show both.
struct SelfSkill {
  double numerator = 0.0;
  double denominator = 0.0;
  double value = 0.0;
};

/// RSS = forecast.value / recalibrated.value. Values above one flag an
/// anomalous signal-to-noise ratio under the scoring rule in question.
struct SkillRatio {
  SelfSkill forecast;
  SelfSkill recalibrated;
  double ratio = 0.0;
};

struct CrpsDiagnostics : SkillRatio {
  FitReport fit;
};

struct LogDiagnostics : SkillRatio {
  FitReport fit;
};

struct QuadraticDiagnostics : SkillRatio {
  RecalibrationMap map;
};

struct SpreadErrorTerms {
  double mean_ensemble_variance = 0.0;   // E v(f)
  double mean_recalibrated_error = 0.0;  // E (y - m(pi))^2, proxy for E v(pi)
  double mean_squared_mean_shift = 0.0;  // E (m(f) - m(pi))^2
};

// CRPS route ---------------------------------------------------------------

/// Forecast side: mean over rows of crps_entropy(row) over crps_entropy of the
/// pooled members. Both are exact entropies of the empirical distributions, so
/// the value never exceeds one. Throws Error{DegenerateClimatology}.
SelfSkill ssc_crps_forecast_terms(const EnsembleArchive& archive);
double ssc_crps_forecast(const EnsembleArchive& archive);

/// Recalibrated side: mean fair CRPS of the mean-shifted ensembles against the
/// verifications, over the CRPS entropy of the verification climatology
/// (pairwise mean over the N(N-1) distinct pairs). The recalibrated ensemble
/// and the verifications stand for continuous distributions, hence the
/// unbiased pair normalisations. Throws Error{DegenerateClimatology}.
SelfSkill ssc_crps_recalibrated_terms(const EnsembleArchive& archive, const RecalibrationMap& map);
double ssc_crps_recalibrated(const EnsembleArchive& archive, const RecalibrationMap& map);

/// Fits the mean shift, then forms the ratio of the two self-skill scores.
CrpsDiagnostics rss_crps(const EnsembleArchive& archive, const MinimizerOptions& options = {});

// Logarithmic route --------------------------------------------------------

/// mean binary_entropy(f_n) / binary_entropy(mean f). Throws Error{DegenerateBaseRate}.
SelfSkill ssc_ls_forecast_terms(const BinaryArchive& archive);
double ssc_ls_forecast(const BinaryArchive& archive);

/// mean log_score(apply_logit(map, f_n), y_n) / binary_entropy(base rate).
SelfSkill ssc_ls_recalibrated_terms(const BinaryArchive& archive, const RecalibrationMap& map);
double ssc_ls_recalibrated(const BinaryArchive& archive, const RecalibrationMap& map);

LogDiagnostics rss_ls(const BinaryArchive& archive, double epsilon = kDefaultClampEpsilon,
                      const MinimizerOptions& options = {});

// Quadratic / classical route ----------------------------------------------

/// Pearson r(row means, y) / sqrt(var(row means) / var(pooled members)).
/// Throws Error{ZeroVariance}.
double classical_rpc(const EnsembleArchive& archive);

/// Closed form 1 - E(m^2) / v for the score (y - m)^2, with m centred
/// empirically. Throws Error{ZeroVariance} when pooled_variance is zero.
double ssc_quadratic(std::span<const double> means, double pooled_variance);

/// Same quantity computed as mean row variance / pooled variance.
double ssc_quadratic_direct(const EnsembleArchive& archive);

/// SSC_sigma(f) / SSC_sigma(pi), with m(pi) the least-squares fit of y on the
/// row means.
QuadraticDiagnostics rss_quadratic(const EnsembleArchive& archive);

/// (E v(f), mean (y - m(pi))^2, mean (m(f) - m(pi))^2) with m(pi) = a + b m(f).
/// On calibrated data the first equals the sum of the other two.
SpreadErrorTerms spread_error_terms(const EnsembleArchive& archive, const RecalibrationMap& map);

// Full report --------------------------------------------------------------

struct DiagnosticsOptions {
  double threshold = 0.0;
  double epsilon = kDefaultClampEpsilon;
};

struct DiagnosticFailure {
  std::string quantity;
  ErrorCode code;
  std::string message;
};

/// Everything that could be computed; failed quantities are left empty and
/// listed in `failures`.
struct DiagnosticsReport {
  std::optional<double> rpc_classical;
  std::optional<CrpsDiagnostics> crps;
  std::optional<LogDiagnostics> ls;
  std::optional<QuadraticDiagnostics> quadratic;
  std::optional<SpreadErrorTerms> spread_error;
  std::vector<DiagnosticFailure> failures;

  bool complete() const { return failures.empty(); }
};

DiagnosticsReport diagnose(const EnsembleArchive& archive, const DiagnosticsOptions& options = {});
DiagnosticsReport diagnose(const BinaryArchive& archive, const DiagnosticsOptions& options = {});

}  // namespace snrkit
