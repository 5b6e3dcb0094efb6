#pragma once

#include <span>
#include <vector>

#include "acr/fit.hpp"
#include "acr/pmf.hpp"

namespace acr {

struct PcaReport {
  // Covariance eigenvalues, nonincreasing.
  std::vector<double> eigenvalues;
  // Partial eigenvalue sums over the total; last entry is 1.
  std::vector<double> explained_variance_cumulative;
  // All PMFs identical: zero total variance, fractions set to 1.
  bool degenerate = false;
  bool standardized = false;

  bool operator==(const PcaReport&) const = default;
};

// Eigenvalues of a symmetric matrix (row-major, n x n) by cyclic Jacobi
// rotations, sorted nonincreasing.
std::vector<double> symmetric_eigenvalues(std::vector<double> matrix, std::size_t n);

// PCA of PMFs as K-dimensional vectors. Covariance by default; with
// standardize = true, the correlation matrix (zero-variance coordinates are
// left unscaled).
PcaReport pca_explained(std::span<const Pmf> pmfs, bool standardize = false);

struct QuantileRow {
  double alpha = 0.0;
  double latent = 0.0;
  // Latent value on the 1..K rating axis: unchanged for real-line families,
  // 1 + (K - 1) x for unit-interval families.
  double rescaled = 0.0;

  bool operator==(const QuantileRow&) const = default;
};

// Quantiles of the latent quality distribution of a fitted quantized model.
// Throws std::invalid_argument for maxentropy, gsd and empirical fits.
std::vector<QuantileRow> quality_quantiles(const FitResult& fit, std::span<const double> alphas);

}  // namespace acr
