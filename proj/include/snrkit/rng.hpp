#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

namespace snrkit {

/// Counter-based random stream. Output i of stream (seed, id) is a fixed
/// function of (seed, id, i), so streams for different rows or bootstrap
/// replicates never depend on the order they are consumed in.
///
/// The mixing function is the SplitMix64 finaliser. Satisfies
/// UniformRandomBitGenerator, but the library only draws through the member
/// functions below so sequences are identical across standard libraries.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept;

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept;

  /// Uniform on {0, ..., n - 1}, unbiased (Lemire's multiply-and-reject).
  std::size_t uniform_index(std::size_t n) noexcept;

  /// Standard normal by inverse CDF.
  double normal() noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 finaliser (a bijection on 64-bit words).
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Inverse of the standard normal CDF for p in (0, 1). Acklam's rational
/// approximation followed by one Halley step, accurate to about 1e-15.
double normal_quantile(double p) noexcept;

}  // namespace snrkit
