#include "snrkit/bootstrap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <thread>

namespace snrkit {

namespace {
constexpr std::uint64_t kBootstrapDomain = 0x626f6f7473747270ULL;
}

std::vector<std::size_t> resample_indices(std::size_t n, RandomStream& stream) {
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = stream.uniform_index(n);
  return idx;
}

RandomStream replicate_stream(std::uint64_t seed, std::size_t replicate) {
  return RandomStream(mix64(seed ^ kBootstrapDomain), replicate);
}

BootstrapDistribution run_replicates(std::string name, double point_estimate,
                                     std::size_t replicates, std::uint64_t seed, unsigned threads,
                                     const std::function<double(std::size_t)>& evaluate) {
  if (replicates == 0) throw Error(ErrorCode::InvalidArgument, "need at least one replicate");

  struct Slot {
    std::optional<double> value;
    std::optional<ReplicateFailure> failure;
  };
  std::vector<Slot> slots(replicates);
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    for (std::size_t r = next++; r < replicates; r = next++) {
      try {
        const double v = evaluate(r);
        if (std::isfinite(v))
          slots[r].value = v;
        else
          slots[r].failure = ReplicateFailure{r, ErrorCode::NonFinite, "statistic is not finite"};
      } catch (const Error& e) {
        slots[r].failure = ReplicateFailure{r, e.code(), e.what()};
      }
    }
  };

  unsigned n_threads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, replicates));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  BootstrapDistribution dist;
  dist.statistic_name = std::move(name);
  dist.point_estimate = point_estimate;
  dist.seed = seed;
  dist.requested = replicates;
  for (auto& s : slots) {
    if (s.value) dist.replicates.push_back(*s.value);
    if (s.failure) dist.failures.push_back(std::move(*s.failure));
  }
  if (dist.replicates.empty())
    throw Error(ErrorCode::AllReplicatesFailed,
                "all " + std::to_string(replicates) + " bootstrap replicates of " +
                    dist.statistic_name + " failed");
  std::sort(dist.replicates.begin(), dist.replicates.end());
  return dist;
}

double quantile_sorted(std::span<const double> sorted, double prob) {
  if (sorted.empty()) throw Error(ErrorCode::EmptyDistribution, "no replicates");
  if (!(prob >= 0.0 && prob <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "quantile probability outside [0,1]");
  const double h = static_cast<double>(sorted.size() - 1) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<double> quantiles(const BootstrapDistribution& dist, std::span<const double> probs) {
  if (dist.replicates.empty()) throw Error(ErrorCode::EmptyDistribution, "no replicates");
  std::vector<double> out;
  out.reserve(probs.size());
  for (double p : probs) out.push_back(quantile_sorted(dist.replicates, p));
  return out;
}

std::vector<HistogramBin> histogram(const BootstrapDistribution& dist, std::size_t bins) {
  const auto& v = dist.replicates;
  if (v.empty()) throw Error(ErrorCode::EmptyDistribution, "no replicates");
  if (bins == 0) throw Error(ErrorCode::InvalidArgument, "need at least one bin");
  const double lo = v.front();
  const double hi = v.back();
  if (!(hi > lo)) return {HistogramBin{lo, hi, v.size()}};

  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<HistogramBin> out(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    out[i].low = lo + width * static_cast<double>(i);
    out[i].high = i + 1 == bins ? hi : lo + width * static_cast<double>(i + 1);
  }
  for (double x : v) {
    auto i = static_cast<std::size_t>((x - lo) / width);
    out[std::min(i, bins - 1)].count++;
  }
  return out;
}

}  // namespace snrkit
