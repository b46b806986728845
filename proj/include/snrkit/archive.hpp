#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace snrkit {

/// One parsed data line: verification followed by K members. The time label
/// is carried separately because it is never used numerically.
struct RawRow {
  std::string time;
  std::vector<double> values;  // y, x1, ..., xK
};

/// N time-indexed pairs of (real verification, K-member real ensemble).
///
/// Members are stored row-major by time. Every entry is finite, N >= 2,
/// K >= 2 and all rows have exactly K members. Immutable once built, so it
/// can be shared between threads freely.
class EnsembleArchive {
 public:
  /// Validates and takes ownership. Throws Error{RaggedRows, NonFinite, TooShort}.
  EnsembleArchive(std::vector<std::string> times, std::vector<double> verifications,
                  std::vector<double> members, std::size_t ensemble_size);

  std::size_t size() const noexcept { return verifications_.size(); }
  std::size_t ensemble_size() const noexcept { return ensemble_size_; }

  std::span<const std::string> times() const noexcept { return times_; }
  std::span<const double> verifications() const noexcept { return verifications_; }
  double verification(std::size_t n) const { return verifications_[n]; }
  std::span<const double> row(std::size_t n) const {
    return std::span<const double>(members_).subspan(n * ensemble_size_, ensemble_size_);
  }
  /// All N*K members, row-major.
  std::span<const double> members() const noexcept { return members_; }

  std::vector<double> row_means() const;

  /// Rows picked by index (with repetition allowed), in the given order.
  EnsembleArchive select(std::span<const std::size_t> indices) const;

 private:
  std::vector<std::string> times_;
  std::vector<double> verifications_;
  std::vector<double> members_;
  std::size_t ensemble_size_;
};

/// N time-indexed pairs of (binary outcome, forecast probability).
class BinaryArchive {
 public:
  /// Throws Error{TooShort} for N < 2, Error{InvalidArgument} for outcomes
  /// outside {0, 1}, probabilities outside [0, 1] or a length mismatch.
  BinaryArchive(std::vector<std::string> times, std::vector<std::uint8_t> outcomes,
                std::vector<double> probabilities);

  std::size_t size() const noexcept { return outcomes_.size(); }
  std::span<const std::string> times() const noexcept { return times_; }
  std::span<const std::uint8_t> outcomes() const noexcept { return outcomes_; }
  std::span<const double> probabilities() const noexcept { return probabilities_; }

  double base_rate() const;
  double mean_probability() const;

  BinaryArchive select(std::span<const std::size_t> indices) const;

 private:
  std::vector<std::string> times_;
  std::vector<std::uint8_t> outcomes_;
  std::vector<double> probabilities_;
};

/// Builds an archive from parsed rows (each row: y then members).
EnsembleArchive validate_ensemble_archive(const std::vector<RawRow>& rows);

/// outcome_n = [y_n > threshold]; probability_n = #{k : x_n^(k) > threshold} / K.
/// Ties at the threshold count as 0.
BinaryArchive binarize(const EnsembleArchive& archive, double threshold);

}  // namespace snrkit
