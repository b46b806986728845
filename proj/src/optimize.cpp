#include "snrkit/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace snrkit {

namespace {

template <std::size_t D>
struct Vertex {
  Point<D> x;
  double f;
};

template <std::size_t D>
Point<D> lerp(const Point<D>& from, const Point<D>& to, double t) {
  Point<D> out;
  for (std::size_t i = 0; i < D; ++i) out[i] = from[i] + t * (to[i] - from[i]);
  return out;
}

template <std::size_t D>
struct RunResult {
  Vertex<D> best;
  int iterations;
  bool converged;
};

template <std::size_t D>
RunResult<D> nelder_mead_run(const std::function<double(const Point<D>&)>& f,
                             const Vertex<D>& start, const MinimizerOptions& opt) {
  constexpr double reflect = 1.0;
  constexpr double expand = 2.0;
  constexpr double contract = 0.5;
  constexpr double shrink = 0.5;

  std::array<Vertex<D>, D + 1> simplex;
  simplex[0] = start;
  for (std::size_t i = 0; i < D; ++i) {
    Point<D> x = start.x;
    x[i] += opt.initial_step;
    simplex[i + 1] = {x, f(x)};
  }

  const auto by_value = [](const Vertex<D>& a, const Vertex<D>& b) { return a.f < b.f; };
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    std::stable_sort(simplex.begin(), simplex.end(), by_value);

    double diameter = 0.0;
    for (std::size_t v = 1; v <= D; ++v)
      for (std::size_t i = 0; i < D; ++i)
        diameter = std::max(diameter, std::abs(simplex[v].x[i] - simplex[0].x[i]));
    if (diameter < opt.x_tolerance || simplex[D].f - simplex[0].f < opt.f_tolerance)
      return {simplex[0], it, true};

    Point<D> centroid{};
    for (std::size_t v = 0; v < D; ++v)
      for (std::size_t i = 0; i < D; ++i) centroid[i] += simplex[v].x[i] / static_cast<double>(D);

    const Vertex<D>& worst = simplex[D];
    const Point<D> xr = lerp(centroid, worst.x, -reflect);
    const double fr = f(xr);

    if (fr < simplex[0].f) {
      const Point<D> xe = lerp(centroid, worst.x, -expand);
      const double fe = f(xe);
      simplex[D] = fe < fr ? Vertex<D>{xe, fe} : Vertex<D>{xr, fr};
      continue;
    }
    if (fr < simplex[D - 1].f) {
      simplex[D] = {xr, fr};
      continue;
    }
    if (fr < worst.f) {
      const Point<D> xc = lerp(centroid, xr, contract);
      const double fc = f(xc);
      if (fc <= fr) {
        simplex[D] = {xc, fc};
        continue;
      }
    } else {
      const Point<D> xc = lerp(centroid, worst.x, contract);
      const double fc = f(xc);
      if (fc < worst.f) {
        simplex[D] = {xc, fc};
        continue;
      }
    }
    for (std::size_t v = 1; v <= D; ++v) {
      simplex[v].x = lerp(simplex[0].x, simplex[v].x, shrink);
      simplex[v].f = f(simplex[v].x);
    }
  }
  std::stable_sort(simplex.begin(), simplex.end(), by_value);
  return {simplex[0], it, false};
}

}  // namespace

template <std::size_t D>
MinimizerResult<D> minimize(const std::function<double(const Point<D>&)>& objective,
                            const Point<D>& start, const MinimizerOptions& options) {
  MinimizerResult<D> result;
  Vertex<D> best{start, objective(start)};
  result.initial_value = best.f;

  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    const auto run = nelder_mead_run<D>(objective, best, options);
    result.iterations += run.iterations;
    const double improvement = best.f - run.best.f;
    if (run.best.f < best.f) best = run.best;
    result.converged = run.converged;
    if (!run.converged) break;
    if (restart > 0 && improvement < options.f_tolerance) break;
  }
  result.x = best.x;
  result.value = best.f;
  return result;
}

template MinimizerResult<1> minimize<1>(const std::function<double(const Point<1>&)>&,
                                        const Point<1>&, const MinimizerOptions&);
template MinimizerResult<2> minimize<2>(const std::function<double(const Point<2>&)>&,
                                        const Point<2>&, const MinimizerOptions&);

}  // namespace snrkit
