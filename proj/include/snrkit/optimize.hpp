#pragma once

#include <array>
#include <cstddef>
#include <functional>

namespace snrkit {

template <std::size_t D>
using Point = std::array<double, D>;

struct MinimizerOptions {
  double initial_step = 0.25;
  double x_tolerance = 1e-8;    // simplex diameter (max-norm)
  double f_tolerance = 1e-10;   // spread of objective values over the simplex
  int max_iterations = 500;     // per run
  int max_restarts = 4;
};

template <std::size_t D>
struct MinimizerResult {
  Point<D> x{};
  double value = 0.0;
  double initial_value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free Nelder-Mead minimisation. Restarts from the incumbent with
/// a fresh simplex until a restart no longer improves the objective by more
/// than f_tolerance. The returned value never exceeds f(start).
template <std::size_t D>
MinimizerResult<D> minimize(const std::function<double(const Point<D>&)>& objective,
                            const Point<D>& start, const MinimizerOptions& options = {});

extern template MinimizerResult<1> minimize<1>(const std::function<double(const Point<1>&)>&,
                                               const Point<1>&, const MinimizerOptions&);
extern template MinimizerResult<2> minimize<2>(const std::function<double(const Point<2>&)>&,
                                               const Point<2>&, const MinimizerOptions&);

}  // namespace snrkit
