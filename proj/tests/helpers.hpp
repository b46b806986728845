#pragma once

#include <random>
#include <vector>

#include "snrkit/archive.hpp"

namespace testing {

inline snrkit::EnsembleArchive make_archive(const std::vector<std::vector<double>>& rows) {
  // Each row: y followed by the members.
  std::vector<snrkit::RawRow> raw;
  for (const auto& r : rows) raw.push_back({"", r});
  return snrkit::validate_ensemble_archive(raw);
}

/// Independent Gaussian verifications and members, with a random linear
/// relation between them.
inline snrkit::EnsembleArchive random_archive(std::mt19937_64& gen, std::size_t n, std::size_t k,
                                              double slope = 1.0, double spread = 1.0) {
  std::normal_distribution<double> z;
  std::vector<double> ys(n), xs(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    const double signal = z(gen);
    ys[i] = slope * signal + 0.7 * z(gen);
    for (std::size_t j = 0; j < k; ++j) xs[i * k + j] = signal + spread * z(gen);
  }
  return snrkit::EnsembleArchive({}, std::move(ys), std::move(xs), k);
}

inline snrkit::BinaryArchive random_binary(std::mt19937_64& gen, std::size_t n, int levels = 5) {
  std::uniform_int_distribution<int> pick(0, levels);
  std::uniform_real_distribution<double> u;
  std::vector<std::uint8_t> outcomes(n);
  std::vector<double> probs(n);
  for (std::size_t i = 0; i < n; ++i) {
    probs[i] = static_cast<double>(pick(gen)) / levels;
    outcomes[i] = u(gen) < 0.2 + 0.6 * probs[i] ? 1 : 0;
  }
  return snrkit::BinaryArchive({}, std::move(outcomes), std::move(probs));
}

}  // namespace testing
