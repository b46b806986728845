#include "snrkit/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "detail/numeric.hpp"
#include "detail/sorted.hpp"
#include "snrkit/error.hpp"

namespace snrkit {

namespace {

double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

void require_members(std::span<const double> members) {
  if (members.empty()) throw Error(ErrorCode::EmptyEnsemble, "ensemble has no members");
}

}  // namespace

namespace detail {

double sorted_pairwise_sum(std::span<const double> sorted) {
  // sum_{j,k} |x_j - x_k| = 2 sum_i (2i - M + 1) x_(i). The weights sum to zero,
  // so a common offset cancels; subtracting the median keeps terms small.
  const std::size_t m = sorted.size();
  if (m < 2) return 0.0;
  const double pivot = sorted[m / 2];
  CompensatedSum s;
  for (std::size_t i = 0; i < m; ++i) {
    const double w = 2.0 * static_cast<double>(i) - static_cast<double>(m) + 1.0;
    s.add(w * (sorted[i] - pivot));
  }
  return 2.0 * s.value();
}

double sorted_mean_abs_deviation(std::span<const double> sorted, double y) {
  CompensatedSum s;
  for (double x : sorted) s.add(std::abs(x - y));
  return s.value() / static_cast<double>(sorted.size());
}

std::vector<double> sorted_copy(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace detail

double mean_absolute_difference(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const auto sorted = detail::sorted_copy(values);
  const double m = static_cast<double>(sorted.size());
  return detail::sorted_pairwise_sum(sorted) / (m * m);
}

double crps_ensemble(std::span<const double> members, double y) {
  require_members(members);
  const auto sorted = detail::sorted_copy(members);
  const double k = static_cast<double>(sorted.size());
  return detail::sorted_mean_abs_deviation(sorted, y) -
         0.5 * detail::sorted_pairwise_sum(sorted) / (k * k);
}

double crps_ensemble_fair(std::span<const double> members, double y) {
  if (members.size() < 2)
    throw Error(ErrorCode::EmptyEnsemble, "fair CRPS needs at least two members");
  const auto sorted = detail::sorted_copy(members);
  const double k = static_cast<double>(sorted.size());
  return detail::sorted_mean_abs_deviation(sorted, y) -
         0.5 * detail::sorted_pairwise_sum(sorted) / (k * (k - 1.0));
}

double crps_entropy(std::span<const double> members) {
  require_members(members);
  return 0.5 * mean_absolute_difference(members);
}

double log_score(double p, int outcome) {
  if (!(p >= 0.0 && p <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "probability outside [0,1]");
  if (outcome != 0 && outcome != 1)
    throw Error(ErrorCode::InvalidArgument, "binary outcome must be 0 or 1");
  const double q = outcome == 1 ? p : 1.0 - p;
  if (q == 0.0)
    throw Error(ErrorCode::InfiniteScore, "log score is infinite: outcome had probability 0");
  return -std::log(q);
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "probability outside [0,1]");
  return -xlogy(p, p) - xlogy(1.0 - p, 1.0 - p);
}

double quadratic_score(double forecast_mean, double y) {
  const double d = y - forecast_mean;
  return d * d;
}

double log_divergence(double forecast, double truth) {
  const auto term = [](double t, double f) {
    if (t == 0.0) return 0.0;
    if (f == 0.0) return std::numeric_limits<double>::infinity();
    return t * std::log(t / f);
  };
  return term(truth, forecast) + term(1.0 - truth, 1.0 - forecast);
}

DecompositionTerms decompose_binary(const BinaryArchive& archive) {
  struct Group {
    std::size_t count = 0;
    std::size_t ones = 0;
  };
  std::map<double, Group> groups;
  const auto probs = archive.probabilities();
  const auto outcomes = archive.outcomes();
  constexpr double inf = std::numeric_limits<double>::infinity();
  detail::CompensatedSum score;
  bool forbidden = false;  // some outcome had forecast probability 0
  for (std::size_t i = 0; i < archive.size(); ++i) {
    auto& g = groups[probs[i]];
    ++g.count;
    g.ones += outcomes[i];
    const double p_outcome = outcomes[i] ? probs[i] : 1.0 - probs[i];
    if (p_outcome == 0.0)
      forbidden = true;
    else
      score.add(-std::log(p_outcome));
  }

  const double n = static_cast<double>(archive.size());
  const double base_rate = archive.base_rate();
  detail::CompensatedSum resolution;
  detail::CompensatedSum reliability;
  for (const auto& [forecast, g] : groups) {
    const double weight = static_cast<double>(g.count) / n;
    const double freq = static_cast<double>(g.ones) / static_cast<double>(g.count);
    resolution.add(weight * log_divergence(base_rate, freq));
    const double d = log_divergence(forecast, freq);
    if (std::isinf(d))
      forbidden = true;
    else
      reliability.add(weight * d);
  }

  DecompositionTerms t;
  t.entropy = binary_entropy(base_rate);
  t.resolution = resolution.value();
  t.reliability = forbidden ? inf : reliability.value();
  t.mean_score = forbidden ? inf : score.value() / n;
  return t;
}

std::vector<double> pooled_climatology(const EnsembleArchive& archive) {
  const auto m = archive.members();
  return std::vector<double>(m.begin(), m.end());
}

}  // namespace snrkit
