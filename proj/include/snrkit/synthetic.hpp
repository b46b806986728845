#pragma once

#include <cstddef>
#include <cstdint>

#include "snrkit/archive.hpp"

namespace snrkit {

/// Linear-Gaussian forecast/verification model with a prescribed signal level.
///
///   m_Y ~ N(0, cos^2 phi),  Y ~ N(m_Y, sin^2 phi),  m_f = c m_Y,
///   members ~ N(m_f, s^2) with s^2 = sin^2 phi + (1 - c)^2 cos^2 phi.
///
/// Y has unit variance and c = 1 gives a perfectly reliable forecast.
struct SyntheticConfig {
  double phi = 0.3 * 3.14159265358979323846;
  double c = 1.0;
  std::size_t ensemble_size = 25;
  std::size_t length = 100;
  std::uint64_t seed = 0;

  /// Throws Error{InvalidArgument} unless 0 < phi < pi/2, c >= 0, K >= 2, N >= 2.
  void validate() const;
};

/// s^2, the ensemble variance matched to the expected squared error of m_f.
double ensemble_variance(const SyntheticConfig& config);

/// Draws the archive. Row n uses its own random stream (seed, n), so the
/// result is bit-identical however rows are scheduled.
///
/// Each row's members are K correlated draws that are individually
/// N(m_f, s^2) and whose sample mean is exactly m_f: z_k ~ N(0,1) i.i.d.,
/// x_k = m_f + s sqrt(K/(K-1)) (z_k - mean z). The ensemble mean is then the
/// forecast mean itself and carries no sampling noise.
EnsembleArchive generate(const SyntheticConfig& config);

/// cos(phi) / cos(psi) with cos(psi) = c cos(phi) / sqrt(c^2 cos^2 phi + s^2).
/// Throws Error{ZeroSignal} for c = 0.
double analytic_rpc(const SyntheticConfig& config);

}  // namespace snrkit
