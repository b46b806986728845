#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "snrkit/archive.hpp"
#include "snrkit/optimize.hpp"

namespace snrkit {

inline constexpr double kDefaultClampEpsilon = 1e-2;

enum class RecalibrationFamily { MeanShiftCRPS, LogitLS, LeastSquares };

std::string_view family_name(RecalibrationFamily family) noexcept;

/// Affine recalibration a + b * (forecast feature). The feature is the
/// ensemble mean for MeanShiftCRPS / LeastSquares and logit(p) for LogitLS.
/// clamp_epsilon is set iff family == LogitLS.
struct RecalibrationMap {
  RecalibrationFamily family = RecalibrationFamily::MeanShiftCRPS;
  double a = 0.0;
  double b = 1.0;
  std::optional<double> clamp_epsilon;

  static RecalibrationMap mean_shift(double a, double b);
  static RecalibrationMap logit(double a, double b, double epsilon = kDefaultClampEpsilon);
  static RecalibrationMap least_squares(double a, double b);
};

struct FitReport {
  RecalibrationMap map;
  double objective_initial = 0.0;  // at the identity (a, b) = (0, 1)
  double objective_final = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Shifts the row so its mean becomes a + b * mean while every member keeps
/// its deviation from the mean.
std::vector<double> apply_mean_shift(std::span<const double> row, double a, double b);

/// apply_mean_shift on every row; verifications are untouched.
EnsembleArchive apply_mean_shift(const EnsembleArchive& archive, const RecalibrationMap& map);

/// Mean over rows of crps_ensemble(apply_mean_shift(row, a, b), y).
double mean_shift_objective(const EnsembleArchive& archive, double a, double b);

/// Fits (a, b) of the mean shift by minimising the mean CRPS, starting from
/// the identity. If the row means carry no signal the slope is fixed at 0 and
/// only the intercept is fitted. Non-convergence is reported via
/// FitReport::converged, not thrown.
FitReport fit_mean_shift_crps(const EnsembleArchive& archive, const MinimizerOptions& options = {});

/// invlogit(a + b logit(clamp(p, eps, 1 - eps))). The map must be LogitLS.
double apply_logit(const RecalibrationMap& map, double p);

/// Mean log score of the logit-recalibrated forecasts.
double logit_objective(const BinaryArchive& archive, double a, double b, double epsilon);

/// Fits the logit recalibration by minimising the mean log score. Needs
/// N >= 3 and both outcomes present (Error{DegenerateOutcomes} otherwise).
FitReport fit_logit(const BinaryArchive& archive, double epsilon = kDefaultClampEpsilon,
                    const MinimizerOptions& options = {});

/// Ordinary least squares of verifications on means.
/// Throws Error{ZeroVariancePredictor} when the means are constant.
RecalibrationMap fit_least_squares(std::span<const double> means,
                                   std::span<const double> verifications);

}  // namespace snrkit
