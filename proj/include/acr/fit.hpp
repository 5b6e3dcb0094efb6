#pragma once

#include <cstdint>

#include "acr/models.hpp"
#include "acr/pmf.hpp"

namespace acr {

struct FitOptions {
  int n_starts = 8;
  double tol = 1e-9;
  int max_iter = 500;
  std::uint64_t seed = 0;
};

struct FitResult {
  ModelKind kind;
  ModelParams theta;
  Pmf pmf;
  // -sum O_k ln q_k in nats, i.e. total * cross-entropy(empirical, model).
  // Evaluated on the unfloored model PMF, so it may be +infinity.
  double neg_log_likelihood;
  bool converged;
  int iterations;
};

// Cross-entropy with model entries floored at 1e-300; the optimization target.
double floored_cross_entropy(const Pmf& empirical, const Pmf& model);

// -sum O_k ln q_k, +infinity if some observed category has q_k = 0.
double negative_log_likelihood(const RatingCounts& counts, const Pmf& model);

// Maximum-likelihood fit of a two-parameter model by minimizing the
// cross-entropy to the empirical PMF. Multistart bounded Nelder-Mead: the
// first start is moment-matched, the rest come from a seed-shifted Halton
// sequence over a typical-parameter region. Scale and shape parameters are
// searched on a log scale. Ties between starts go to the lexicographically
// smallest parameter vector.
//
// Throws std::invalid_argument for Empirical (use fit_empirical) and
// ConvergenceError when no start converges.
FitResult mle_fit(ModelKind kind, const RatingCounts& data, const FitOptions& options = {});

// The empirical model: normalize(data), K-1 free parameters.
FitResult fit_empirical(const RatingCounts& data);

// Dispatches to mle_fit or fit_empirical.
FitResult fit(ModelKind kind, const RatingCounts& data, const FitOptions& options = {});

}  // namespace acr
