#pragma once

#include <cmath>
#include <span>

namespace snrkit::detail {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      compensation_ += (sum_ - t) + x;
    else
      compensation_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

inline double mean(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value() / static_cast<double>(xs.size());
}

// Population (1/N) variance.
inline double variance(std::span<const double> xs) {
  const double m = mean(xs);
  CompensatedSum s;
  for (double x : xs) s.add((x - m) * (x - m));
  return s.value() / static_cast<double>(xs.size());
}

// Population (1/N) covariance.
inline double covariance(std::span<const double> xs, std::span<const double> ys) {
  const double mx = mean(xs);
  const double my = mean(ys);
  CompensatedSum s;
  for (std::size_t i = 0; i < xs.size(); ++i) s.add((xs[i] - mx) * (ys[i] - my));
  return s.value() / static_cast<double>(xs.size());
}

}  // namespace snrkit::detail
