#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "acr/latent.hpp"
#include "acr/pmf.hpp"

namespace acr {

enum class ModelKind {
  QuantizedNormal,
  QuantizedLogistic,
  QuantizedLogitLogistic,
  QuantizedBeta,
  MaxEntropy,
  Gsd,
  Empirical,
};

// Stable names used on the command line and in reports:
// normal, logistic, logit-logistic, beta, maxentropy, gsd, empirical.
std::string_view model_name(ModelKind kind);
// Throws std::invalid_argument listing the valid names.
ModelKind parse_model(std::string_view name);
std::span<const ModelKind> all_models();
// The six two-parameter models.
std::span<const ModelKind> parametric_models();

std::optional<LatentKind> latent_kind(ModelKind kind);
bool is_latent(ModelKind kind);
int parameter_count(ModelKind kind, int categories = kDefaultCategories);

// (a, b) for quantized models, (psi, rho) for MaxEntropy and Gsd, the full
// probability vector for Empirical.
struct ModelParams {
  std::vector<double> theta;
  bool operator==(const ModelParams&) const = default;
};

struct Bound {
  double low = 0.0;
  double high = 0.0;
};

// Box constraints for fitting:
//   normal, logistic, logit-logistic: a in [-50, 50], b in [1e-6, 1e3]
//   beta: both shapes in [1e-6, 1e6]
//   maxentropy, gsd: psi in [1, K], rho in [0, 1]
//   empirical: K-1 free simplex coordinates in [0, 1]
std::vector<Bound> param_bounds(ModelKind kind, int categories = kDefaultCategories);

Pmf pmf_of(ModelKind kind, const ModelParams& params, int categories = kDefaultCategories);

// Generalized score distribution. With n = K - 1 trials and binomial
// success probability (psi - 1) / n, the binomial member sits at
//   C(psi) = (v_max - v_max / n) / (v_max - v_min).
// For rho >= C the PMF mixes that binomial with the two-point
// minimal-variance PMF on {floor(psi), ceil(psi)} using weight
// (1 - rho) / (1 - C); for rho < C it is a beta-binomial with the same mean
// and intra-class correlation chosen so the variance matches rho exactly.
Pmf gsd_pmf(double psi, double rho, int categories = kDefaultCategories);
double gsd_dispersion_threshold(double psi, int categories = kDefaultCategories);

}  // namespace acr
