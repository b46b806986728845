#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "snrkit/error.hpp"
#include "snrkit/rng.hpp"

namespace snrkit {

struct ReplicateFailure {
  std::size_t replicate = 0;
  ErrorCode code = ErrorCode::InvalidArgument;
  std::string message;
};

/// Sampling distribution of a statistic under row resampling.
/// `replicates` holds the successful values sorted ascending; failed
/// replicates are listed separately and excluded from quantiles.
struct BootstrapDistribution {
  std::string statistic_name;
  std::vector<double> replicates;
  double point_estimate = 0.0;
  std::uint64_t seed = 0;
  std::size_t requested = 0;
  std::vector<ReplicateFailure> failures;
};

struct BootstrapOptions {
  std::size_t replicates = 100;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct HistogramBin {
  double low = 0.0;
  double high = 0.0;
  std::size_t count = 0;
};

/// n indices drawn uniformly from {0, ..., n-1} with replacement.
std::vector<std::size_t> resample_indices(std::size_t n, RandomStream& stream);

/// Random stream for replicate r under a master seed. Domain-separated from
/// the streams the synthetic generator derives from the same seed.
RandomStream replicate_stream(std::uint64_t seed, std::size_t replicate);

/// Runs `evaluate(r)` for r in [0, replicates) on a worker pool and gathers
/// the results in replicate order. An Error thrown by evaluate, or a
/// non-finite value, is recorded as a failure. Throws
/// Error{AllReplicatesFailed} if nothing succeeds.
BootstrapDistribution run_replicates(std::string name, double point_estimate,
                                     std::size_t replicates, std::uint64_t seed, unsigned threads,
                                     const std::function<double(std::size_t)>& evaluate);

/// Applies `statistic` to `archive` (the point estimate) and to B
/// row-resampled copies. The statistic owns its whole pipeline, including
/// any recalibration fit, and must be safe to call concurrently.
template <typename Archive, typename Statistic>
BootstrapDistribution bootstrap_statistic(const Archive& archive, Statistic&& statistic,
                                          std::string name, const BootstrapOptions& options = {}) {
  const double point = statistic(archive);
  return run_replicates(std::move(name), point, options.replicates, options.seed, options.threads,
                        [&](std::size_t r) {
                          RandomStream stream = replicate_stream(options.seed, r);
                          const auto rows = resample_indices(archive.size(), stream);
                          return statistic(archive.select(rows));
                        });
}

/// Same as bootstrap_statistic but with caller-supplied resamples, one index
/// vector per replicate (used for exhaustive enumeration).
template <typename Archive, typename Statistic>
BootstrapDistribution bootstrap_over(const Archive& archive, Statistic&& statistic,
                                     std::string name,
                                     const std::vector<std::vector<std::size_t>>& resamples,
                                     unsigned threads = 0) {
  const double point = statistic(archive);
  return run_replicates(std::move(name), point, resamples.size(), 0, threads,
                        [&](std::size_t r) { return statistic(archive.select(resamples[r])); });
}

/// Empirical quantiles by linear interpolation between order statistics
/// (h = (B-1) p). Throws Error{EmptyDistribution}.
std::vector<double> quantiles(const BootstrapDistribution& dist, std::span<const double> probs);
double quantile_sorted(std::span<const double> sorted, double prob);

/// Equal-width bins spanning [min, max]; counts sum to the replicate count.
/// A distribution with a single distinct value yields one bin.
std::vector<HistogramBin> histogram(const BootstrapDistribution& dist, std::size_t bins);

}  // namespace snrkit
