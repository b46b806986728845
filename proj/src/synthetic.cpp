#include "snrkit/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "snrkit/error.hpp"
#include "snrkit/rng.hpp"

namespace snrkit {

void SyntheticConfig::validate() const {
  if (!(phi > 0.0 && phi < std::numbers::pi / 2.0))
    throw Error(ErrorCode::InvalidArgument, "phi must lie in (0, pi/2)");
  if (!(c >= 0.0) || !std::isfinite(c))
    throw Error(ErrorCode::InvalidArgument, "c must be a finite value >= 0");
  if (ensemble_size < 2) throw Error(ErrorCode::InvalidArgument, "ensemble size must be >= 2");
  if (length < 2) throw Error(ErrorCode::InvalidArgument, "archive length must be >= 2");
}

double ensemble_variance(const SyntheticConfig& config) {
  const double s = std::sin(config.phi);
  const double co = std::cos(config.phi);
  return s * s + (1.0 - config.c) * (1.0 - config.c) * co * co;
}

EnsembleArchive generate(const SyntheticConfig& config) {
  config.validate();
  const std::size_t n_rows = config.length;
  const std::size_t k = config.ensemble_size;
  const double signal_sd = std::cos(config.phi);
  const double noise_sd = std::sin(config.phi);
  const double member_sd = std::sqrt(ensemble_variance(config));
  const double inflate = std::sqrt(static_cast<double>(k) / static_cast<double>(k - 1));

  std::vector<std::string> times(n_rows);
  std::vector<double> ys(n_rows);
  std::vector<double> xs(n_rows * k);
  std::vector<double> z(k);
  for (std::size_t n = 0; n < n_rows; ++n) {
    RandomStream rng(config.seed, n);
    const double m_y = signal_sd * rng.normal();
    ys[n] = m_y + noise_sd * rng.normal();
    const double m_f = config.c * m_y;

    double z_mean = 0.0;
    for (auto& v : z) {
      v = rng.normal();
      z_mean += v;
    }
    z_mean /= static_cast<double>(k);
    for (std::size_t j = 0; j < k; ++j)
      xs[n * k + j] = m_f + member_sd * inflate * (z[j] - z_mean);
    times[n] = std::to_string(n + 1);
  }
  return EnsembleArchive(std::move(times), std::move(ys), std::move(xs), k);
}

double analytic_rpc(const SyntheticConfig& config) {
  config.validate();
  if (config.c == 0.0) throw Error(ErrorCode::ZeroSignal, "c = 0: the forecast carries no signal");
  // cos(phi) / cos(psi) = sqrt(c^2 cos^2 + s^2) / c, and
  // c^2 cos^2 + s^2 = 1 + 2 c (c - 1) cos^2, which is exactly 1 at c = 1.
  const double co = std::cos(config.phi);
  const double c = config.c;
  return std::sqrt(1.0 + 2.0 * c * (c - 1.0) * co * co) / c;
}

}  // namespace snrkit
