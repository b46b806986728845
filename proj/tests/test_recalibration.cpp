#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "snrkit/error.hpp"
#include "snrkit/optimize.hpp"
#include "snrkit/recalibration.hpp"
#include "snrkit/synthetic.hpp"

using namespace snrkit;
using doctest::Approx;

namespace {

double row_variance(std::span<const double> r) { return oracle::variance(r); }

// y_n = intercept + slope * m_n + noise, members spread like the noise.
EnsembleArchive affine_archive(std::mt19937_64& gen, std::size_t n, std::size_t k,
                               double intercept, double slope) {
  std::normal_distribution<double> z;
  std::vector<double> ys(n), xs(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    const double m = z(gen);
    ys[i] = intercept + slope * m + 0.5 * z(gen);
    for (std::size_t j = 0; j < k; ++j) xs[i * k + j] = m + 0.5 * z(gen);
  }
  return EnsembleArchive({}, std::move(ys), std::move(xs), k);
}

}  // namespace

TEST_CASE("apply_mean_shift") {
  const std::vector<double> row{1.0, 3.0, 8.0};
  CHECK(apply_mean_shift(row, 0.0, 1.0) == row);
  CHECK(apply_mean_shift(std::vector<double>{1.0, 3.0}, 1.0, 0.0) == std::vector<double>{0.0, 2.0});

  std::mt19937_64 gen(1);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> r(9);
    for (auto& x : r) x = z(gen);
    const double a = z(gen), b = z(gen);
    const auto s = apply_mean_shift(r, a, b);
    CHECK(oracle::mean(s) == Approx(a + b * oracle::mean(r)).epsilon(1e-12));
    CHECK(row_variance(s) == Approx(row_variance(r)).epsilon(1e-10));
    const double shift = s[0] - r[0];
    for (std::size_t k = 1; k < r.size(); ++k) CHECK(s[k] - r[k] == Approx(shift).epsilon(1e-12));
  }
}

TEST_CASE("mean_shift_objective matches the rebuilt-archive oracle") {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = testing::random_archive(gen, 25, 1 + 1 + trial % 9);
    const double ia = z(gen), ib = z(gen);
    CHECK(mean_shift_objective(a, ia, ib) ==
          Approx(oracle::mean_shift_objective(a, ia, ib)).epsilon(1e-11));
  }
}

TEST_CASE("mean-shift fit reaches the grid-search optimum") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = testing::random_archive(gen, 30, 5, 0.5 + 0.3 * trial, 0.8);
    const auto fit = fit_mean_shift_crps(a);
    const auto grid = oracle::grid_search(
        [&](double ia, double ib) { return mean_shift_objective(a, ia, ib); }, -3, 3, -2, 4);
    CHECK(fit.objective_final <= grid.value + 1e-4);
    CHECK(std::abs(fit.objective_final - grid.value) <= 1e-4);
    CHECK(fit.objective_final <= fit.objective_initial + 1e-9);
    CHECK(fit.objective_final ==
          Approx(oracle::mean_shift_objective(a, fit.map.a, fit.map.b)).epsilon(1e-10));
  }
}

TEST_CASE("mean-shift fit recovers a known affine map") {
  std::mt19937_64 gen(4);
  const auto a = affine_archive(gen, 2000, 10, 0.3, 2.0);
  const auto fit = fit_mean_shift_crps(a);
  CHECK(fit.converged);
  CHECK(fit.map.b == Approx(2.0).epsilon(0.05));
  CHECK(fit.map.a == Approx(0.3).epsilon(0.05));
  CHECK(fit.map.family == RecalibrationFamily::MeanShiftCRPS);
  CHECK_FALSE(fit.map.clamp_epsilon.has_value());
}

TEST_CASE("mean-shift fit on a calibrated archive stays near the identity") {
  SyntheticConfig cfg;
  cfg.length = 10000;
  cfg.seed = 5;
  const auto fit = fit_mean_shift_crps(generate(cfg));
  CHECK(std::abs(fit.map.a) < 0.03);
  CHECK(std::abs(fit.map.b - 1.0) < 0.05);
}

TEST_CASE("mean-shift fit with point-mass ensembles is least absolute deviation") {
  std::mt19937_64 gen(6);
  std::normal_distribution<double> z;
  std::vector<double> ys(40), xs(80);
  for (std::size_t i = 0; i < 40; ++i) {
    const double m = z(gen);
    xs[2 * i] = xs[2 * i + 1] = m;
    ys[i] = 1.0 - 0.5 * m + 0.3 * z(gen);
  }
  const EnsembleArchive a({}, ys, xs, 2);
  const auto lad = [&](double ia, double ib) {
    double s = 0.0;
    for (std::size_t i = 0; i < 40; ++i) s += std::abs(ia + ib * xs[2 * i] - ys[i]);
    return s / 40.0;
  };
  const auto grid = oracle::grid_search(lad, -2, 3, -3, 2);
  const auto fit = fit_mean_shift_crps(a);
  CHECK(fit.objective_final == Approx(lad(fit.map.a, fit.map.b)).epsilon(1e-12));
  CHECK(std::abs(fit.objective_final - grid.value) <= 1e-4);
}

TEST_CASE("mean-shift fit invariants") {
  std::mt19937_64 gen(7);
  const auto a = testing::random_archive(gen, 60, 8, 1.4);
  const auto fit = fit_mean_shift_crps(a);

  SUBCASE("member permutation") {
    std::vector<double> xs(a.members().begin(), a.members().end());
    for (std::size_t n = 0; n < a.size(); ++n)
      std::shuffle(xs.begin() + n * 8, xs.begin() + (n + 1) * 8, gen);
    const EnsembleArchive p({}, std::vector<double>(a.verifications().begin(), a.verifications().end()), xs, 8);
    const auto pf = fit_mean_shift_crps(p);
    CHECK(pf.map.a == Approx(fit.map.a).epsilon(1e-9));
    CHECK(pf.map.b == Approx(fit.map.b).epsilon(1e-9));
  }

  SUBCASE("affine change of units") {
    const double alpha = 37.5, beta = -210.0;
    std::vector<double> ys, xs;
    for (double y : a.verifications()) ys.push_back(alpha * y + beta);
    for (double x : a.members()) xs.push_back(alpha * x + beta);
    const auto sf = fit_mean_shift_crps(EnsembleArchive({}, ys, xs, 8));
    CHECK(sf.map.b == Approx(fit.map.b).epsilon(1e-9));
    CHECK(sf.map.a == Approx(alpha * fit.map.a + beta * (1.0 - fit.map.b)).epsilon(1e-9));
    CHECK(sf.objective_final == Approx(alpha * fit.objective_final).epsilon(1e-9));
  }

  SUBCASE("refitting the recalibrated archive is the identity") {
    const auto again = fit_mean_shift_crps(apply_mean_shift(a, fit.map));
    CHECK(std::abs(again.map.a) < 5e-2);
    CHECK(std::abs(again.map.b - 1.0) < 5e-2);
  }
}

TEST_CASE("mean-shift refit idempotence at large N") {
  std::mt19937_64 gen(8);
  const auto a = testing::random_archive(gen, 10000, 10, 0.6);
  const auto fit = fit_mean_shift_crps(a);
  const auto again = fit_mean_shift_crps(apply_mean_shift(a, fit.map));
  CHECK(std::abs(again.map.a) < 1e-2);
  CHECK(std::abs(again.map.b - 1.0) < 1e-2);
}

TEST_CASE("mean-shift fit degenerate inputs") {
  // constant row means: slope fixed at 0, intercept fitted
  const auto flat = testing::make_archive({{1, -1, 1}, {2, -2, 2}, {4, -0.5, 0.5}, {3, -1, 1}});
  const auto fit = fit_mean_shift_crps(flat);
  CHECK(fit.map.b == 0.0);
  CHECK(fit.objective_final <= fit.objective_initial + 1e-9);
  const auto grid = oracle::grid_search(
      [&](double ia, double) { return mean_shift_objective(flat, ia, 0.0); }, -5, 10, 0, 0);
  CHECK(std::abs(fit.objective_final - grid.value) <= 1e-4);

  const auto two = testing::make_archive({{1, 0, 1}, {2, 1, 2}});
  CHECK_THROWS_AS(fit_mean_shift_crps(two), Error);
}

TEST_CASE("apply_logit") {
  const auto id = RecalibrationMap::logit(0.0, 1.0);
  CHECK(apply_logit(id, 0.3) == Approx(0.3).epsilon(1e-14));
  CHECK(apply_logit(id, 0.0) == Approx(1e-2).epsilon(1e-14));
  CHECK(apply_logit(id, 1.0) == Approx(1.0 - 1e-2).epsilon(1e-14));
  const auto m = RecalibrationMap::logit(-0.4, 1.7, 0.05);
  double prev = 0.0;
  for (double p = 0.0; p <= 1.0; p += 0.01) {
    const double q = apply_logit(m, p);
    CHECK(q > 0.0);
    CHECK(q < 1.0);
    CHECK(q >= prev);
    prev = q;
  }
  CHECK_THROWS_AS(apply_logit(RecalibrationMap::mean_shift(0, 1), 0.5), Error);
}

TEST_CASE("recalibration map invariants") {
  CHECK_THROWS_AS(RecalibrationMap::mean_shift(std::nan(""), 1.0), Error);
  CHECK_THROWS_AS(RecalibrationMap::least_squares(0.0, INFINITY), Error);
  CHECK_THROWS_AS(RecalibrationMap::logit(0.0, 1.0, 0.0), Error);
  CHECK_THROWS_AS(RecalibrationMap::logit(0.0, 1.0, 0.5), Error);
  CHECK(RecalibrationMap::logit(0, 1).clamp_epsilon == 1e-2);
  CHECK_FALSE(RecalibrationMap::least_squares(0, 1).clamp_epsilon.has_value());
  CHECK(family_name(RecalibrationFamily::LogitLS) == "logit_ls");
}

TEST_CASE("logit fit") {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u;

  SUBCASE("calibrated forecasts give the identity") {
    std::vector<std::uint8_t> y(20000);
    std::vector<double> p(20000);
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = 0.05 + 0.9 * u(gen);
      y[i] = u(gen) < p[i];
    }
    const auto fit = fit_logit(BinaryArchive({}, y, p));
    CHECK(std::abs(fit.map.a) < 0.05);
    CHECK(std::abs(fit.map.b - 1.0) < 0.05);
    CHECK(fit.map.clamp_epsilon == 1e-2);
  }

  SUBCASE("uninformative forecasts give the base rate") {
    std::vector<std::uint8_t> y(400);
    std::vector<double> p(400);
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = std::floor(u(gen) * 11) / 10;
      y[i] = u(gen) < 0.3;
    }
    const BinaryArchive a({}, y, p);
    const auto fit = fit_logit(a);
    const auto grid = oracle::grid_search(
        [&](double ia, double ib) { return oracle::logit_objective(a, ia, ib, 1e-2); }, -3, 3, -2, 2);
    CHECK(std::abs(fit.objective_final - grid.value) <= 1e-4);
    CHECK(std::abs(fit.map.b) < 0.1);
    const double q = 1.0 / (1.0 + std::exp(-fit.map.a));
    CHECK(q == Approx(a.base_rate()).epsilon(0.1));
    CHECK(fit.objective_final == Approx(logit_objective(a, fit.map.a, fit.map.b, 1e-2)));
  }

  SUBCASE("forecasts of exactly 0 and 1 are clamped") {
    const BinaryArchive a({}, {1, 0, 1, 0, 1, 0}, {0.0, 1.0, 1.0, 0.0, 0.5, 0.5});
    const auto fit = fit_logit(a);
    CHECK(std::isfinite(fit.objective_final));
    CHECK(fit.objective_final <= fit.objective_initial + 1e-9);
  }

  SUBCASE("grid oracle on random archives") {
    for (int trial = 0; trial < 5; ++trial) {
      const auto a = testing::random_binary(gen, 80, 4);
      const auto fit = fit_logit(a, 0.02);
      const auto grid = oracle::grid_search(
          [&](double ia, double ib) { return oracle::logit_objective(a, ia, ib, 0.02); }, -3, 3,
          -1, 3);
      CHECK(std::abs(fit.objective_final - grid.value) <= 1e-4);
    }
  }

  SUBCASE("errors") {
    try {
      fit_logit(BinaryArchive({}, {1, 1, 1, 1}, {0.1, 0.5, 0.6, 0.9}));
      FAIL("expected DegenerateOutcomes");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateOutcomes);
    }
    CHECK_THROWS_AS(fit_logit(BinaryArchive({}, {1, 0}, {0.1, 0.5})), Error);
  }
}

TEST_CASE("least squares") {
  const std::vector<double> m{0.5, -1.0, 2.0, 3.5};
  auto fit = fit_least_squares(m, m);
  CHECK(fit.a == Approx(0.0).epsilon(1e-14));
  CHECK(fit.b == Approx(1.0).epsilon(1e-14));
  std::vector<double> y;
  for (double x : m) y.push_back(3.0 + 2.0 * x);
  fit = fit_least_squares(m, y);
  CHECK(fit.a == Approx(3.0).epsilon(1e-13));
  CHECK(fit.b == Approx(2.0).epsilon(1e-13));
  CHECK(fit.family == RecalibrationFamily::LeastSquares);

  std::mt19937_64 gen(10);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> xs(200), ys(200);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      xs[i] = 5.0 + z(gen);
      ys[i] = -1.0 + 0.7 * xs[i] + z(gen);
    }
    double a = 0, b = 0;
    oracle::normal_equations(xs, ys, a, b);
    fit = fit_least_squares(xs, ys);
    CHECK(std::abs(fit.a - a) < 1e-10);
    CHECK(std::abs(fit.b - b) < 1e-10);
  }

  try {
    fit_least_squares(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3});
    FAIL("expected ZeroVariancePredictor");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroVariancePredictor);
  }
}

TEST_CASE("minimizer") {
  const auto bowl = [](const Point<2>& x) {
    return (x[0] - 1.5) * (x[0] - 1.5) + 10.0 * (x[1] + 0.5) * (x[1] + 0.5);
  };
  const auto r = minimize<2>(bowl, {0.0, 1.0});
  CHECK(r.converged);
  CHECK(r.x[0] == Approx(1.5).epsilon(1e-4));
  CHECK(r.x[1] == Approx(-0.5).epsilon(1e-4));
  CHECK(r.value <= r.initial_value);

  const auto kink = [](const Point<1>& x) { return std::abs(x[0] - 0.3); };
  const auto k = minimize<1>(kink, {5.0});
  CHECK(k.x[0] == Approx(0.3).epsilon(1e-6));

  MinimizerOptions tight;
  tight.max_iterations = 3;
  tight.max_restarts = 0;
  const auto capped = minimize<2>(bowl, {10.0, 10.0}, tight);
  CHECK_FALSE(capped.converged);
  CHECK(capped.iterations <= 3);
}
