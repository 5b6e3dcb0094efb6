#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "acr/pmf.hpp"

namespace acr {

enum class LatentKind { Normal, Logistic, LogitLogistic, Beta };
enum class Support { RealLine, UnitInterval };

Support support_of(LatentKind kind);
std::string_view latent_name(LatentKind kind);

// Normal/Logistic: a = location, b = scale.
// LogitLogistic: logit(Y) ~ Logistic(a, b).
// Beta: a = alpha, b = beta (both shapes).
struct LatentParams {
  double a = 0.0;
  double b = 1.0;
};

// Throws DomainError unless b > 0 (and a > 0 for Beta), both finite.
void validate(LatentKind kind, LatentParams params);

// Quantization cut points tau_1 < ... < tau_{K-1}, interior to the support.
class Thresholds {
 public:
  Thresholds(Support support, std::vector<double> taus);

  Support support() const { return support_; }
  int categories() const { return static_cast<int>(taus_.size()) + 1; }
  std::span<const double> taus() const { return taus_; }

 private:
  Support support_;
  std::vector<double> taus_;
};

// Real-line families: k + 0.5 for k = 1..K-1. Unit-interval: k / K.
Thresholds default_thresholds(LatentKind kind, int categories = kDefaultCategories);

double latent_cdf(LatentKind kind, LatentParams params, double x);
// 1 - cdf, evaluated directly in the upper tail.
double latent_sf(LatentKind kind, LatentParams params, double x);
double latent_pdf(LatentKind kind, LatentParams params, double x);

// P(X = k) = F(tau_k) - F(tau_{k-1}) with tau_0, tau_K the support endpoints.
Pmf quantize(LatentKind kind, LatentParams params, const Thresholds& thresholds);

// x with cdf(x) = alpha; closed form for the logistic families, safeguarded
// Newton on a bisection bracket otherwise.
double latent_quantile(LatentKind kind, LatentParams params, double alpha);

}  // namespace acr
