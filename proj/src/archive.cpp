#include "snrkit/archive.hpp"

#include <cmath>
#include <string>

#include "detail/numeric.hpp"
#include "snrkit/error.hpp"

namespace snrkit {

EnsembleArchive::EnsembleArchive(std::vector<std::string> times,
                                 std::vector<double> verifications,
                                 std::vector<double> members, std::size_t ensemble_size)
    : times_(std::move(times)),
      verifications_(std::move(verifications)),
      members_(std::move(members)),
      ensemble_size_(ensemble_size) {
  const std::size_t n = verifications_.size();
  if (ensemble_size_ == 0 || members_.size() != n * ensemble_size_)
    throw Error(ErrorCode::RaggedRows, "member matrix is not N x K");
  if (times_.empty()) {
    times_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) times_.push_back(std::to_string(i + 1));
  }
  if (times_.size() != n)
    throw Error(ErrorCode::InvalidArgument, "time labels do not match the number of rows");
  if (n < 2 || ensemble_size_ < 2)
    throw Error(ErrorCode::TooShort, "ensemble archive needs N >= 2 and K >= 2, got N=" +
                                         std::to_string(n) +
                                         " K=" + std::to_string(ensemble_size_));
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(verifications_[i]))
      throw Error(ErrorCode::NonFinite, "non-finite verification in row " + std::to_string(i + 1));
  for (std::size_t i = 0; i < members_.size(); ++i)
    if (!std::isfinite(members_[i]))
      throw Error(ErrorCode::NonFinite,
                  "non-finite member in row " + std::to_string(i / ensemble_size_ + 1));
}

std::vector<double> EnsembleArchive::row_means() const {
  std::vector<double> means(size());
  for (std::size_t n = 0; n < size(); ++n) means[n] = detail::mean(row(n));
  return means;
}

EnsembleArchive EnsembleArchive::select(std::span<const std::size_t> indices) const {
  std::vector<std::string> times;
  std::vector<double> ys;
  std::vector<double> xs;
  times.reserve(indices.size());
  ys.reserve(indices.size());
  xs.reserve(indices.size() * ensemble_size_);
  for (std::size_t i : indices) {
    if (i >= size()) throw Error(ErrorCode::InvalidArgument, "row index out of range");
    times.push_back(times_[i]);
    ys.push_back(verifications_[i]);
    const auto r = row(i);
    xs.insert(xs.end(), r.begin(), r.end());
  }
  return EnsembleArchive(std::move(times), std::move(ys), std::move(xs), ensemble_size_);
}

BinaryArchive::BinaryArchive(std::vector<std::string> times, std::vector<std::uint8_t> outcomes,
                             std::vector<double> probabilities)
    : times_(std::move(times)),
      outcomes_(std::move(outcomes)),
      probabilities_(std::move(probabilities)) {
  const std::size_t n = outcomes_.size();
  if (probabilities_.size() != n)
    throw Error(ErrorCode::InvalidArgument, "outcome and probability columns differ in length");
  if (times_.empty()) {
    times_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) times_.push_back(std::to_string(i + 1));
  }
  if (times_.size() != n)
    throw Error(ErrorCode::InvalidArgument, "time labels do not match the number of rows");
  if (n < 2) throw Error(ErrorCode::TooShort, "binary archive needs N >= 2");
  for (std::size_t i = 0; i < n; ++i) {
    if (outcomes_[i] > 1)
      throw Error(ErrorCode::InvalidArgument, "outcome not in {0,1} in row " + std::to_string(i + 1));
    const double p = probabilities_[i];
    if (!std::isfinite(p))
      throw Error(ErrorCode::NonFinite, "non-finite probability in row " + std::to_string(i + 1));
    if (p < 0.0 || p > 1.0)
      throw Error(ErrorCode::InvalidArgument,
                  "probability outside [0,1] in row " + std::to_string(i + 1));
  }
}

double BinaryArchive::base_rate() const {
  std::size_t ones = 0;
  for (auto o : outcomes_) ones += o;
  return static_cast<double>(ones) / static_cast<double>(size());
}

double BinaryArchive::mean_probability() const { return detail::mean(probabilities_); }

BinaryArchive BinaryArchive::select(std::span<const std::size_t> indices) const {
  std::vector<std::string> times;
  std::vector<std::uint8_t> outcomes;
  std::vector<double> probs;
  times.reserve(indices.size());
  outcomes.reserve(indices.size());
  probs.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) throw Error(ErrorCode::InvalidArgument, "row index out of range");
    times.push_back(times_[i]);
    outcomes.push_back(outcomes_[i]);
    probs.push_back(probabilities_[i]);
  }
  return BinaryArchive(std::move(times), std::move(outcomes), std::move(probs));
}

EnsembleArchive validate_ensemble_archive(const std::vector<RawRow>& rows) {
  if (rows.empty()) throw Error(ErrorCode::TooShort, "empty table");
  const std::size_t width = rows.front().values.size();
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].values.size() != width)
      throw Error(ErrorCode::RaggedRows, "row " + std::to_string(i + 1) + " has " +
                                             std::to_string(rows[i].values.size()) +
                                             " values, expected " + std::to_string(width));
  if (width < 3)
    throw Error(ErrorCode::TooShort, "need a verification and at least two members per row");

  const std::size_t k = width - 1;
  std::vector<std::string> times;
  std::vector<double> ys;
  std::vector<double> xs;
  times.reserve(rows.size());
  ys.reserve(rows.size());
  xs.reserve(rows.size() * k);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    times.push_back(rows[i].time.empty() ? std::to_string(i + 1) : rows[i].time);
    ys.push_back(rows[i].values[0]);
    xs.insert(xs.end(), rows[i].values.begin() + 1, rows[i].values.end());
  }
  return EnsembleArchive(std::move(times), std::move(ys), std::move(xs), k);
}

BinaryArchive binarize(const EnsembleArchive& archive, double threshold) {
  const std::size_t n = archive.size();
  const double k = static_cast<double>(archive.ensemble_size());
  std::vector<std::string> times(archive.times().begin(), archive.times().end());
  std::vector<std::uint8_t> outcomes(n);
  std::vector<double> probs(n);
  for (std::size_t i = 0; i < n; ++i) {
    outcomes[i] = archive.verification(i) > threshold ? 1 : 0;
    std::size_t above = 0;
    for (double x : archive.row(i)) above += x > threshold ? 1 : 0;
    probs[i] = static_cast<double>(above) / k;
  }
  return BinaryArchive(std::move(times), std::move(outcomes), std::move(probs));
}

}  // namespace snrkit
