#include "acr/latent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "acr/special.hpp"

namespace acr {

namespace {

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double logistic_pdf(double z) {
  const double e = std::exp(-std::abs(z));
  return e / ((1.0 + e) * (1.0 + e));
}

double logit(double u) { return std::log(u) - std::log1p(-u); }

// Root of cdf(x) = alpha on [lo, hi] by Newton steps kept inside a shrinking
// bisection bracket.
template <typename Cdf, typename Pdf>
double invert_monotone(Cdf cdf, Pdf pdf, double alpha, double lo, double hi, double x) {
  for (int iter = 0; iter < 400; ++iter) {
    const double f = cdf(x) - alpha;
    if (f == 0.0) return x;
    if (f < 0.0) lo = x; else hi = x;
    const double slope = pdf(x);
    double next = x - f / slope;
    if (!(slope > 0.0) || !std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x)) || hi - lo <= 1e-15 * std::max(1.0, std::abs(x))) {
      return next;
    }
    x = next;
  }
  return x;
}

}  // namespace

Support support_of(LatentKind kind) {
  switch (kind) {
    case LatentKind::Normal:
    case LatentKind::Logistic:
      return Support::RealLine;
    case LatentKind::LogitLogistic:
    case LatentKind::Beta:
      return Support::UnitInterval;
  }
  throw std::logic_error("unhandled latent kind");
}

std::string_view latent_name(LatentKind kind) {
  switch (kind) {
    case LatentKind::Normal: return "normal";
    case LatentKind::Logistic: return "logistic";
    case LatentKind::LogitLogistic: return "logit-logistic";
    case LatentKind::Beta: return "beta";
  }
  throw std::logic_error("unhandled latent kind");
}

void validate(LatentKind kind, LatentParams params) {
  if (!std::isfinite(params.a) || !std::isfinite(params.b)) throw DomainError("latent parameters must be finite");
  if (!(params.b > 0.0)) throw DomainError("latent scale/shape b must be positive");
  if (kind == LatentKind::Beta && !(params.a > 0.0)) throw DomainError("beta shape alpha must be positive");
}

Thresholds::Thresholds(Support support, std::vector<double> taus) : support_(support), taus_(std::move(taus)) {
  if (taus_.empty()) throw DomainError("need at least one threshold");
  for (std::size_t i = 0; i < taus_.size(); ++i) {
    if (!std::isfinite(taus_[i])) throw DomainError("thresholds must be finite");
    if (support_ == Support::UnitInterval && !(taus_[i] > 0.0 && taus_[i] < 1.0)) {
      throw DomainError("unit-interval thresholds must lie in (0, 1)");
    }
    if (i > 0 && !(taus_[i] > taus_[i - 1])) throw DomainError("thresholds must be strictly increasing");
  }
}

Thresholds default_thresholds(LatentKind kind, int categories) {
  if (categories < 2) throw DomainError("need at least 2 categories");
  std::vector<double> taus(categories - 1);
  const Support support = support_of(kind);
  for (int k = 1; k < categories; ++k) {
    taus[k - 1] = support == Support::RealLine ? k + 0.5 : static_cast<double>(k) / categories;
  }
  return Thresholds(support, std::move(taus));
}

double latent_cdf(LatentKind kind, LatentParams params, double x) {
  validate(kind, params);
  switch (kind) {
    case LatentKind::Normal:
      return special::normal_cdf((x - params.a) / params.b);
    case LatentKind::Logistic:
      return logistic((x - params.a) / params.b);
    case LatentKind::LogitLogistic:
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return logistic((logit(x) - params.a) / params.b);
    case LatentKind::Beta:
      return special::inc_beta(params.a, params.b, std::clamp(x, 0.0, 1.0));
  }
  throw std::logic_error("unhandled latent kind");
}

double latent_sf(LatentKind kind, LatentParams params, double x) {
  validate(kind, params);
  switch (kind) {
    case LatentKind::Normal:
      return special::normal_sf((x - params.a) / params.b);
    case LatentKind::Logistic:
      return logistic(-(x - params.a) / params.b);
    case LatentKind::LogitLogistic:
      if (x <= 0.0) return 1.0;
      if (x >= 1.0) return 0.0;
      return logistic(-(logit(x) - params.a) / params.b);
    case LatentKind::Beta:
      return special::inc_beta(params.b, params.a, 1.0 - std::clamp(x, 0.0, 1.0));
  }
  throw std::logic_error("unhandled latent kind");
}

double latent_pdf(LatentKind kind, LatentParams params, double x) {
  validate(kind, params);
  switch (kind) {
    case LatentKind::Normal:
      return special::normal_pdf((x - params.a) / params.b) / params.b;
    case LatentKind::Logistic:
      return logistic_pdf((x - params.a) / params.b) / params.b;
    case LatentKind::LogitLogistic:
      if (x <= 0.0 || x >= 1.0) return 0.0;
      return logistic_pdf((logit(x) - params.a) / params.b) / (params.b * x * (1.0 - x));
    case LatentKind::Beta:
      if (x <= 0.0 || x >= 1.0) return 0.0;
      return std::exp((params.a - 1.0) * std::log(x) + (params.b - 1.0) * std::log1p(-x) -
                      special::log_beta(params.a, params.b));
  }
  throw std::logic_error("unhandled latent kind");
}

Pmf quantize(LatentKind kind, LatentParams params, const Thresholds& thresholds) {
  validate(kind, params);
  if (thresholds.support() != support_of(kind)) throw DomainError("thresholds do not match the family's support");
  const auto taus = thresholds.taus();
  const int k = thresholds.categories();
  // Lower-tail values where they are small, upper-tail values where the CDF
  // is close to one, so each bin is a difference of two small numbers.
  std::vector<double> lower(k - 1), upper(k - 1);
  for (int i = 0; i < k - 1; ++i) {
    lower[i] = latent_cdf(kind, params, taus[i]);
    upper[i] = lower[i] > 0.5 ? latent_sf(kind, params, taus[i]) : 1.0 - lower[i];
  }
  std::vector<double> probs(k);
  probs[0] = lower[0];
  probs[k - 1] = upper[k - 2];
  for (int i = 1; i < k - 1; ++i) {
    const double bin = lower[i - 1] > 0.5 ? upper[i - 1] - upper[i] : lower[i] - lower[i - 1];
    probs[i] = std::max(bin, 0.0);
  }
  return Pmf::from_weights(std::move(probs));
}

double latent_quantile(LatentKind kind, LatentParams params, double alpha) {
  validate(kind, params);
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
  switch (kind) {
    case LatentKind::Logistic:
      return params.a + params.b * logit(alpha);
    case LatentKind::LogitLogistic:
      return logistic(params.a + params.b * logit(alpha));
    case LatentKind::Normal: {
      const double z = invert_monotone(special::normal_cdf, special::normal_pdf, alpha, -40.0, 40.0, 0.0);
      return params.a + params.b * z;
    }
    case LatentKind::Beta: {
      auto cdf = [&](double x) { return latent_cdf(kind, params, x); };
      auto pdf = [&](double x) { return latent_pdf(kind, params, x); };
      const double m = params.a / (params.a + params.b);
      return invert_monotone(cdf, pdf, alpha, 0.0, 1.0, m);
    }
  }
  throw std::logic_error("unhandled latent kind");
}

}  // namespace acr
