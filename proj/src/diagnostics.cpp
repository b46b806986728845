#include "snrkit/diagnostics.hpp"

#include <cmath>
#include <functional>

#include "detail/numeric.hpp"
#include "detail/sorted.hpp"
#include "snrkit/scoring.hpp"

namespace snrkit {

namespace {

constexpr double kMinDenominator = 1e-12;

SelfSkill make_self_skill(double numerator, double denominator, const char* what) {
  if (!(denominator >= kMinDenominator))
    throw Error(ErrorCode::DegenerateClimatology, std::string(what) + ": climatological entropy is zero");
  return {numerator, denominator, numerator / denominator};
}

template <typename T>
T make_ratio(SelfSkill forecast, SelfSkill recalibrated) {
  if (!(recalibrated.value >= kMinDenominator))
    throw Error(ErrorCode::DegenerateClimatology, "recalibrated self-skill score is zero");
  T out;
  out.forecast = forecast;
  out.recalibrated = recalibrated;
  out.ratio = forecast.value / recalibrated.value;
  return out;
}

void require_variance(double v, const char* what) {
  if (!(v > 0.0)) throw Error(ErrorCode::ZeroVariance, std::string(what) + " has zero variance");
}

}  // namespace

SelfSkill ssc_crps_forecast_terms(const EnsembleArchive& archive) {
  detail::CompensatedSum rows;
  for (std::size_t n = 0; n < archive.size(); ++n) rows.add(crps_entropy(archive.row(n)));
  const double numerator = rows.value() / static_cast<double>(archive.size());
  return make_self_skill(numerator, crps_entropy(archive.members()), "CRPS forecast self-skill");
}

double ssc_crps_forecast(const EnsembleArchive& archive) {
  return ssc_crps_forecast_terms(archive).value;
}

SelfSkill ssc_crps_recalibrated_terms(const EnsembleArchive& archive, const RecalibrationMap& map) {
  detail::CompensatedSum scores;
  for (std::size_t n = 0; n < archive.size(); ++n)
    scores.add(crps_ensemble_fair(apply_mean_shift(archive.row(n), map.a, map.b),
                                  archive.verification(n)));
  const double n = static_cast<double>(archive.size());
  const auto sorted_y = detail::sorted_copy(archive.verifications());
  const double climatology = 0.5 * detail::sorted_pairwise_sum(sorted_y) / (n * (n - 1.0));
  return make_self_skill(scores.value() / n, climatology, "CRPS recalibrated self-skill");
}

double ssc_crps_recalibrated(const EnsembleArchive& archive, const RecalibrationMap& map) {
  return ssc_crps_recalibrated_terms(archive, map).value;
}

CrpsDiagnostics rss_crps(const EnsembleArchive& archive, const MinimizerOptions& options) {
  const SelfSkill forecast = ssc_crps_forecast_terms(archive);
  const FitReport fit = fit_mean_shift_crps(archive, options);
  auto out = make_ratio<CrpsDiagnostics>(forecast, ssc_crps_recalibrated_terms(archive, fit.map));
  out.fit = fit;
  return out;
}

SelfSkill ssc_ls_forecast_terms(const BinaryArchive& archive) {
  const double mean_p = archive.mean_probability();
  if (!(mean_p > 0.0 && mean_p < 1.0))
    throw Error(ErrorCode::DegenerateBaseRate, "mean forecast probability is 0 or 1");
  detail::CompensatedSum entropies;
  for (double p : archive.probabilities()) entropies.add(binary_entropy(p));
  return make_self_skill(entropies.value() / static_cast<double>(archive.size()),
                         binary_entropy(mean_p), "log-score forecast self-skill");
}

double ssc_ls_forecast(const BinaryArchive& archive) { return ssc_ls_forecast_terms(archive).value; }

SelfSkill ssc_ls_recalibrated_terms(const BinaryArchive& archive, const RecalibrationMap& map) {
  const double rate = archive.base_rate();
  if (!(rate > 0.0 && rate < 1.0))
    throw Error(ErrorCode::DegenerateBaseRate, "base rate of outcomes is 0 or 1");
  detail::CompensatedSum scores;
  const auto probs = archive.probabilities();
  const auto outcomes = archive.outcomes();
  for (std::size_t i = 0; i < archive.size(); ++i)
    scores.add(log_score(apply_logit(map, probs[i]), outcomes[i]));
  return make_self_skill(scores.value() / static_cast<double>(archive.size()),
                         binary_entropy(rate), "log-score recalibrated self-skill");
}

double ssc_ls_recalibrated(const BinaryArchive& archive, const RecalibrationMap& map) {
  return ssc_ls_recalibrated_terms(archive, map).value;
}

LogDiagnostics rss_ls(const BinaryArchive& archive, double epsilon, const MinimizerOptions& options) {
  const SelfSkill forecast = ssc_ls_forecast_terms(archive);
  const double rate = archive.base_rate();
  if (!(rate > 0.0 && rate < 1.0))
    throw Error(ErrorCode::DegenerateBaseRate, "base rate of outcomes is 0 or 1");
  const FitReport fit = fit_logit(archive, epsilon, options);
  auto out = make_ratio<LogDiagnostics>(forecast, ssc_ls_recalibrated_terms(archive, fit.map));
  out.fit = fit;
  return out;
}

double classical_rpc(const EnsembleArchive& archive) {
  const auto means = archive.row_means();
  const auto ys = archive.verifications();
  const double var_m = detail::variance(means);
  const double var_y = detail::variance(ys);
  const double var_pooled = detail::variance(archive.members());
  require_variance(var_m, "ensemble mean");
  require_variance(var_y, "verification");
  require_variance(var_pooled, "pooled ensemble");
  const double r = detail::covariance(means, ys) / std::sqrt(var_m * var_y);
  return r / std::sqrt(var_m / var_pooled);
}

double ssc_quadratic(std::span<const double> means, double pooled_variance) {
  require_variance(pooled_variance, "climatology");
  return 1.0 - detail::variance(means) / pooled_variance;
}

double ssc_quadratic_direct(const EnsembleArchive& archive) {
  const double pooled = detail::variance(archive.members());
  require_variance(pooled, "climatology");
  detail::CompensatedSum rows;
  for (std::size_t n = 0; n < archive.size(); ++n) rows.add(detail::variance(archive.row(n)));
  return rows.value() / static_cast<double>(archive.size()) / pooled;
}

QuadraticDiagnostics rss_quadratic(const EnsembleArchive& archive) {
  const auto means = archive.row_means();
  const auto ys = archive.verifications();
  const double var_pooled = detail::variance(archive.members());
  const double var_y = detail::variance(ys);
  require_variance(var_pooled, "pooled ensemble");
  require_variance(var_y, "verification");

  const RecalibrationMap map = fit_least_squares(means, ys);
  std::vector<double> fitted(means.size());
  for (std::size_t i = 0; i < means.size(); ++i) fitted[i] = map.a + map.b * means[i];

  // Numerators are the expected self-entropies v - E(m^2); values use the
  // closed form directly.
  const SelfSkill forecast{var_pooled - detail::variance(means), var_pooled,
                           ssc_quadratic(means, var_pooled)};
  const SelfSkill recalibrated{var_y - detail::variance(fitted), var_y,
                               ssc_quadratic(fitted, var_y)};
  auto out = make_ratio<QuadraticDiagnostics>(forecast, recalibrated);
  out.map = map;
  return out;
}

SpreadErrorTerms spread_error_terms(const EnsembleArchive& archive, const RecalibrationMap& map) {
  detail::CompensatedSum spread;
  detail::CompensatedSum error;
  detail::CompensatedSum shift;
  for (std::size_t n = 0; n < archive.size(); ++n) {
    const auto row = archive.row(n);
    const double m = detail::mean(row);
    const double recal = map.a + map.b * m;
    spread.add(detail::variance(row));
    error.add((archive.verification(n) - recal) * (archive.verification(n) - recal));
    shift.add((m - recal) * (m - recal));
  }
  const double n = static_cast<double>(archive.size());
  return {spread.value() / n, error.value() / n, shift.value() / n};
}

namespace {

template <typename F>
void attempt(DiagnosticsReport& report, const char* quantity, F&& compute) {
  try {
    compute();
  } catch (const Error& e) {
    report.failures.push_back({quantity, e.code(), e.what()});
  }
}

}  // namespace

DiagnosticsReport diagnose(const EnsembleArchive& archive, const DiagnosticsOptions& options) {
  DiagnosticsReport report;
  attempt(report, "rpc_classical", [&] { report.rpc_classical = classical_rpc(archive); });
  attempt(report, "rss_crps", [&] { report.crps = rss_crps(archive); });
  attempt(report, "rss_ls", [&] {
    report.ls = rss_ls(binarize(archive, options.threshold), options.epsilon);
  });
  attempt(report, "rss_quadratic", [&] { report.quadratic = rss_quadratic(archive); });
  attempt(report, "spread_error", [&] {
    const auto map = fit_least_squares(archive.row_means(), archive.verifications());
    report.spread_error = spread_error_terms(archive, map);
  });
  return report;
}

DiagnosticsReport diagnose(const BinaryArchive& archive, const DiagnosticsOptions& options) {
  DiagnosticsReport report;
  attempt(report, "rss_ls", [&] { report.ls = rss_ls(archive, options.epsilon); });
  return report;
}

}  // namespace snrkit
