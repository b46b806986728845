#pragma once

#include <span>
#include <vector>

#include "snrkit/archive.hpp"

namespace snrkit {

// Proper scoring rules, negatively oriented. Logarithms are natural.
//
// Ensemble scores treat the K members as the empirical (step) CDF
//   f(x) = (1/K) #{k : x_k <= x}.
// All pairwise sums are accumulated over the sorted members with compensated
// summation, so every result is bit-for-bit invariant under member order.

/// Sum over all K^2 ordered pairs of |x_j - x_k|, divided by K^2.
/// O(K log K) via sorted prefix weights.
double mean_absolute_difference(std::span<const double> values);

/// CRPS of the empirical CDF of `members` against `y`, energy form:
///   mean_k |x_k - y| - (1/2) mean_{j,k} |x_j - x_k|.
/// Throws Error{EmptyEnsemble} when members is empty.
double crps_ensemble(std::span<const double> members, double y);

/// Fair CRPS: the pairwise term is normalised by K(K-1) instead of K^2, which
/// makes it an unbiased estimate of the CRPS of the distribution the members
/// were sampled from. Needs K >= 2.
double crps_ensemble_fair(std::span<const double> members, double y);

/// Entropy of the empirical distribution under the CRPS, i.e. the expected
/// CRPS of the ensemble against a draw from itself: (1/2) mean_{j,k} |x_j - x_k|.
double crps_entropy(std::span<const double> members);

/// -log(p) for outcome 1, -log(1 - p) for outcome 0.
/// Throws Error{InfiniteScore} when the realised outcome had probability 0.
double log_score(double p, int outcome);

/// -p log p - (1-p) log(1-p), with 0 log 0 = 0.
double binary_entropy(double p);

/// (y - m)^2.
double quadratic_score(double forecast_mean, double y);

/// Divergence of the logarithmic score, D(q, p) = S(q, p) - E(p), i.e. the
/// Kullback-Leibler divergence of Bernoulli(p) from Bernoulli(q). Infinite if q
/// puts zero mass on an outcome p can produce.
double log_divergence(double forecast, double truth);

struct DecompositionTerms {
  double entropy = 0.0;      // E(pooled base rate)
  double resolution = 0.0;   // mean D(base rate, pi_group)
  double reliability = 0.0;  // mean D(f_group, pi_group)
  double mean_score = 0.0;   // mean log score of the archive
};

/// Entropy - resolution + reliability decomposition of the mean logarithmic
/// score. Records are grouped by exactly equal forecast probability and the
/// recalibrated probability of each group is its observed outcome frequency.
/// A forecast of probability 0 for an outcome that occurred makes
/// mean_score and reliability +inf; nothing is thrown.
DecompositionTerms decompose_binary(const BinaryArchive& archive);

/// All N*K members pooled; the empirical estimate of the forecast climatology.
std::vector<double> pooled_climatology(const EnsembleArchive& archive);

}  // namespace snrkit
