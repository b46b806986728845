#include "snrkit/recalibration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "detail/numeric.hpp"
#include "detail/sorted.hpp"
#include "snrkit/error.hpp"
#include "snrkit/scoring.hpp"

namespace snrkit {

std::string_view family_name(RecalibrationFamily family) noexcept {
  switch (family) {
    case RecalibrationFamily::MeanShiftCRPS: return "mean_shift_crps";
    case RecalibrationFamily::LogitLS: return "logit_ls";
    case RecalibrationFamily::LeastSquares: return "least_squares";
  }
  return "unknown";
}

namespace {

void require_finite(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw Error(ErrorCode::NonFinite, "recalibration parameters must be finite");
}

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double logit(double p) { return std::log(p / (1.0 - p)); }

double clamp_probability(double p, double epsilon) { return std::clamp(p, epsilon, 1.0 - epsilon); }

// Evaluates the mean-shift CRPS objective in O(N log K): each row is kept as
// sorted deviations from its mean with prefix sums, so mean_k |d_k - t| is a
// binary search away. The pairwise (spread) term does not depend on (a, b).
class MeanShiftScorer {
 public:
  MeanShiftScorer(const EnsembleArchive& archive, double offset, double scale)
      : k_(archive.ensemble_size()), n_(archive.size()) {
    deviations_.reserve(n_ * k_);
    prefix_.reserve(n_ * (k_ + 1));
    means_.reserve(n_);
    ys_.reserve(n_);
    detail::CompensatedSum spread;
    for (std::size_t n = 0; n < n_; ++n) {
      const auto sorted = detail::sorted_copy(archive.row(n));
      const double m = detail::mean(sorted);
      means_.push_back((m - offset) / scale);
      ys_.push_back((archive.verification(n) - offset) / scale);
      double acc = 0.0;
      prefix_.push_back(0.0);
      for (double x : sorted) {
        const double d = (x - m) / scale;
        deviations_.push_back(d);
        acc += d;
        prefix_.push_back(acc);
      }
      spread.add(0.5 * detail::sorted_pairwise_sum(std::span<const double>(deviations_).last(k_)) /
                 static_cast<double>(k_ * k_));
    }
    mean_spread_ = spread.value() / static_cast<double>(n_);
  }

  // Mean CRPS of the shifted ensembles, in the scaled units.
  double operator()(double a, double b) const {
    detail::CompensatedSum total;
    const double k = static_cast<double>(k_);
    for (std::size_t n = 0; n < n_; ++n) {
      const double t = ys_[n] - (a + b * means_[n]);
      const double* d = deviations_.data() + n * k_;
      const double* p = prefix_.data() + n * (k_ + 1);
      const std::size_t below = static_cast<std::size_t>(std::lower_bound(d, d + k_, t) - d);
      const double lower = t * static_cast<double>(below) - p[below];
      const double upper = (p[k_] - p[below]) - t * static_cast<double>(k_ - below);
      total.add((lower + upper) / k);
    }
    return total.value() / static_cast<double>(n_) - mean_spread_;
  }

  double mean_feature_variance() const { return detail::variance(means_); }
  double mean_of_features() const { return detail::mean(means_); }

 private:
  std::size_t k_;
  std::size_t n_;
  std::vector<double> deviations_;
  std::vector<double> prefix_;
  std::vector<double> means_;
  std::vector<double> ys_;
  double mean_spread_ = 0.0;
};

}  // namespace

RecalibrationMap RecalibrationMap::mean_shift(double a, double b) {
  require_finite(a, b);
  return {RecalibrationFamily::MeanShiftCRPS, a, b, std::nullopt};
}

RecalibrationMap RecalibrationMap::logit(double a, double b, double epsilon) {
  require_finite(a, b);
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw Error(ErrorCode::InvalidArgument, "clamp epsilon must lie in (0, 0.5)");
  return {RecalibrationFamily::LogitLS, a, b, epsilon};
}

RecalibrationMap RecalibrationMap::least_squares(double a, double b) {
  require_finite(a, b);
  return {RecalibrationFamily::LeastSquares, a, b, std::nullopt};
}

std::vector<double> apply_mean_shift(std::span<const double> row, double a, double b) {
  const double m = detail::mean(row);
  const double target = a + b * m;
  std::vector<double> out(row.size());
  for (std::size_t k = 0; k < row.size(); ++k) out[k] = target + (row[k] - m);
  return out;
}

EnsembleArchive apply_mean_shift(const EnsembleArchive& archive, const RecalibrationMap& map) {
  if (map.family == RecalibrationFamily::LogitLS)
    throw Error(ErrorCode::InvalidArgument, "a logit map cannot shift ensemble means");
  std::vector<double> members;
  members.reserve(archive.members().size());
  for (std::size_t n = 0; n < archive.size(); ++n) {
    const auto shifted = apply_mean_shift(archive.row(n), map.a, map.b);
    members.insert(members.end(), shifted.begin(), shifted.end());
  }
  const auto ys = archive.verifications();
  return EnsembleArchive({archive.times().begin(), archive.times().end()},
                         {ys.begin(), ys.end()}, std::move(members), archive.ensemble_size());
}

double mean_shift_objective(const EnsembleArchive& archive, double a, double b) {
  return MeanShiftScorer(archive, 0.0, 1.0)(a, b);
}

FitReport fit_mean_shift_crps(const EnsembleArchive& archive, const MinimizerOptions& options) {
  if (archive.size() < 3) throw Error(ErrorCode::TooShort, "mean-shift fit needs N >= 3");

  // Work in units of the pooled members so the fit is affine equivariant and
  // the initial simplex size is meaningful. In scaled units the map is
  // a' + b' m' with a = scale a' + offset (1 - b').
  const double offset = detail::mean(archive.members());
  double scale = std::sqrt(detail::variance(archive.members()));
  if (!(scale > 0.0)) scale = std::sqrt(detail::variance(archive.verifications()));
  if (!(scale > 0.0)) scale = 1.0;

  const MeanShiftScorer scorer(archive, offset, scale);
  FitReport report;

  if (scorer.mean_feature_variance() <= 1e-24) {
    // No signal: only a + b m' matters, so fix b = 0 and fit the intercept.
    const double m0 = scorer.mean_of_features();
    const auto result = minimize<1>(
        [&](const Point<1>& t) { return scorer(t[0], 0.0); }, Point<1>{m0}, options);
    report.map = RecalibrationMap::mean_shift(scale * result.x[0] + offset, 0.0);
    report.objective_initial = scale * scorer(0.0, 1.0);
    report.objective_final = scale * std::min(result.value, scorer(0.0, 1.0));
    report.iterations = result.iterations;
    report.converged = result.converged;
    return report;
  }

  const auto result = minimize<2>(
      [&](const Point<2>& p) { return scorer(p[0], p[1]); }, Point<2>{0.0, 1.0}, options);
  const double a = scale * result.x[0] + offset * (1.0 - result.x[1]);
  report.map = RecalibrationMap::mean_shift(a, result.x[1]);
  report.objective_initial = scale * result.initial_value;
  report.objective_final = scale * result.value;
  report.iterations = result.iterations;
  report.converged = result.converged;
  return report;
}

double apply_logit(const RecalibrationMap& map, double p) {
  if (map.family != RecalibrationFamily::LogitLS || !map.clamp_epsilon)
    throw Error(ErrorCode::InvalidArgument, "apply_logit needs a logit map");
  const double z = map.a + map.b * logit(clamp_probability(p, *map.clamp_epsilon));
  return 1.0 / (1.0 + std::exp(-z));
}

namespace {

double logit_loss(std::span<const double> features, std::span<const std::uint8_t> outcomes,
                  double a, double b) {
  detail::CompensatedSum total;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const double z = a + b * features[i];
    total.add(outcomes[i] ? softplus(-z) : softplus(z));
  }
  return total.value() / static_cast<double>(features.size());
}

std::vector<double> logit_features(const BinaryArchive& archive, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw Error(ErrorCode::InvalidArgument, "clamp epsilon must lie in (0, 0.5)");
  std::vector<double> features;
  features.reserve(archive.size());
  for (double p : archive.probabilities()) features.push_back(logit(clamp_probability(p, epsilon)));
  return features;
}

}  // namespace

double logit_objective(const BinaryArchive& archive, double a, double b, double epsilon) {
  return logit_loss(logit_features(archive, epsilon), archive.outcomes(), a, b);
}

FitReport fit_logit(const BinaryArchive& archive, double epsilon, const MinimizerOptions& options) {
  if (archive.size() < 3) throw Error(ErrorCode::TooShort, "logit fit needs N >= 3");
  const double rate = archive.base_rate();
  if (rate == 0.0 || rate == 1.0)
    throw Error(ErrorCode::DegenerateOutcomes, "all outcomes are equal; the logit fit diverges");

  const auto features = logit_features(archive, epsilon);
  const auto outcomes = archive.outcomes();
  const auto result = minimize<2>(
      [&](const Point<2>& p) { return logit_loss(features, outcomes, p[0], p[1]); },
      Point<2>{0.0, 1.0}, options);

  FitReport report;
  report.map = RecalibrationMap::logit(result.x[0], result.x[1], epsilon);
  report.objective_initial = result.initial_value;
  report.objective_final = result.value;
  report.iterations = result.iterations;
  report.converged = result.converged;
  return report;
}

RecalibrationMap fit_least_squares(std::span<const double> means,
                                   std::span<const double> verifications) {
  if (means.size() != verifications.size())
    throw Error(ErrorCode::InvalidArgument, "means and verifications differ in length");
  if (means.size() < 3) throw Error(ErrorCode::TooShort, "least squares needs N >= 3");
  const double var = detail::variance(means);
  if (!(var > 0.0))
    throw Error(ErrorCode::ZeroVariancePredictor, "ensemble means have zero variance");
  const double b = detail::covariance(means, verifications) / var;
  const double a = detail::mean(verifications) - b * detail::mean(means);
  return RecalibrationMap::least_squares(a, b);
}

}  // namespace snrkit
