#include "acr/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace acr {

namespace {

struct Vertex {
  std::vector<double> x;
  double f = 0.0;
};

class BoxedObjective {
 public:
  BoxedObjective(const Objective& objective, std::span<const double> low, std::span<const double> high)
      : objective_(objective), low_(low), high_(high) {}

  void project(std::vector<double>& x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], low_[i], high_[i]);
  }

  Vertex make(std::vector<double> x) const {
    project(x);
    double f = objective_(x);
    if (!std::isfinite(f)) f = std::numeric_limits<double>::infinity();
    return {std::move(x), f};
  }

 private:
  const Objective& objective_;
  std::span<const double> low_, high_;
};

std::vector<double> affine(const std::vector<double>& c, const std::vector<double>& w, double t) {
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i] + t * (c[i] - w[i]);
  return out;
}

MinimizeResult run_once(const BoxedObjective& box, std::vector<double> start, std::span<const double> low,
                        std::span<const double> high, const NelderMeadOptions& options) {
  const std::size_t n = start.size();
  std::vector<Vertex> simplex;
  simplex.reserve(n + 1);
  simplex.push_back(box.make(start));
  for (std::size_t i = 0; i < n; ++i) {
    auto x = simplex.front().x;
    double step = options.initial_step * (high[i] - low[i]);
    if (step == 0.0) step = options.initial_step;
    x[i] = x[i] + step <= high[i] ? x[i] + step : x[i] - step;
    simplex.push_back(box.make(std::move(x)));
  }

  const double xtol = std::sqrt(options.tol);
  MinimizeResult result;
  int iter = 0;
  for (; iter < options.max_iter; ++iter) {
    std::stable_sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    const double f_best = simplex.front().f;
    const double f_worst = simplex.back().f;
    double diameter = 0.0;
    for (std::size_t v = 1; v <= n; ++v) {
      for (std::size_t i = 0; i < n; ++i) diameter = std::max(diameter, std::abs(simplex[v].x[i] - simplex[0].x[i]));
    }
    const bool flat = std::isfinite(f_worst) && f_worst - f_best <= options.tol * (1.0 + std::abs(f_best));
    if (flat && diameter <= xtol) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i] / n;
    }
    const Vertex& worst = simplex.back();
    Vertex reflected = box.make(affine(centroid, worst.x, 1.0));
    if (reflected.f < simplex.front().f) {
      Vertex expanded = box.make(affine(centroid, worst.x, 2.0));
      simplex.back() = expanded.f < reflected.f ? std::move(expanded) : std::move(reflected);
      continue;
    }
    if (reflected.f < simplex[n - 1].f) {
      simplex.back() = std::move(reflected);
      continue;
    }
    const bool outside = reflected.f < worst.f;
    Vertex contracted = box.make(affine(centroid, worst.x, outside ? 0.5 : -0.5));
    if (contracted.f < (outside ? reflected.f : worst.f)) {
      simplex.back() = std::move(contracted);
      continue;
    }
    // Shrink toward the best vertex.
    for (std::size_t v = 1; v <= n; ++v) {
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = simplex[0].x[i] + 0.5 * (simplex[v].x[i] - simplex[0].x[i]);
      simplex[v] = box.make(std::move(x));
    }
  }
  auto best = std::min_element(simplex.begin(), simplex.end(),
                               [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  result.x = best->x;
  result.value = best->f;
  result.iterations = iter;
  return result;
}

}  // namespace

MinimizeResult nelder_mead(const Objective& objective, std::vector<double> start, std::span<const double> low,
                           std::span<const double> high, const NelderMeadOptions& options) {
  if (start.empty() || start.size() != low.size() || start.size() != high.size()) {
    throw std::invalid_argument("nelder_mead: start and bounds must have the same nonzero dimension");
  }
  for (std::size_t i = 0; i < low.size(); ++i) {
    if (!(low[i] <= high[i])) throw std::invalid_argument("nelder_mead: empty box");
  }
  const BoxedObjective box(objective, low, high);
  box.project(start);
  MinimizeResult best = run_once(box, std::move(start), low, high, options);
  int total = best.iterations;
  for (int r = 0; r < options.restarts; ++r) {
    MinimizeResult next = run_once(box, best.x, low, high, options);
    total += next.iterations;
    const bool improved = next.value < best.value - options.tol * (1.0 + std::abs(best.value));
    const bool was_converged = best.converged;
    if (next.value <= best.value) best = std::move(next);
    // A fresh simplex that finds nothing better certifies the value even when
    // the minimizer itself is not identified (flat valleys toward the box).
    best.converged = best.converged || was_converged || (!improved && std::isfinite(best.value));
    if (!improved) break;
  }
  best.iterations = total;
  return best;
}

}  // namespace acr
