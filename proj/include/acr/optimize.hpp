#pragma once

#include <functional>
#include <span>
#include <vector>

namespace acr {

struct NelderMeadOptions {
  // Converged when the simplex function values agree within
  // tol * (1 + |f_best|) and the simplex diameter is below sqrt(tol).
  double tol = 1e-9;
  int max_iter = 500;
  // Initial simplex edge, as a fraction of each coordinate's box width.
  double initial_step = 0.05;
  // Fresh-simplex restarts from the best point. A restart that improves the
  // value by less than tol also counts as convergence.
  int restarts = 2;
};

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

// Nelder-Mead on a box: every trial point is projected onto [low, high]
// coordinate-wise before evaluation. Non-finite objective values are
// treated as +infinity.
MinimizeResult nelder_mead(const Objective& objective, std::vector<double> start, std::span<const double> low,
                           std::span<const double> high, const NelderMeadOptions& options = {});

}  // namespace acr
