#include "acr/models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "acr/maxent.hpp"

namespace acr {

namespace {

constexpr std::array<ModelKind, 7> kAll = {
    ModelKind::QuantizedNormal, ModelKind::QuantizedLogistic, ModelKind::QuantizedLogitLogistic,
    ModelKind::QuantizedBeta,   ModelKind::MaxEntropy,        ModelKind::Gsd,
    ModelKind::Empirical,
};

constexpr double kBoundSlack = 1e-12;

double binomial_coefficient(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

std::vector<double> binomial_probs(int trials, double p) {
  std::vector<double> out(trials + 1);
  for (int k = 0; k <= trials; ++k) {
    out[k] = binomial_coefficient(trials, k) * std::pow(p, k) * std::pow(1.0 - p, trials - k);
  }
  return out;
}

// Beta-binomial with alpha = p s, beta = (1 - p) s, written as products of
// ratios so that small and very large s are both stable.
std::vector<double> beta_binomial_probs(int trials, double p, double s) {
  const double alpha = p * s;
  const double beta = (1.0 - p) * s;
  std::vector<double> out(trials + 1);
  for (int k = 0; k <= trials; ++k) {
    double w = binomial_coefficient(trials, k);
    for (int i = 0; i < k; ++i) w *= (alpha + i) / (s + i);
    for (int j = 0; j < trials - k; ++j) w *= (beta + j) / (s + k + j);
    out[k] = w;
  }
  return out;
}

void check_theta(ModelKind kind, const ModelParams& params, int categories) {
  const auto bounds = param_bounds(kind, categories);
  const std::size_t expected = kind == ModelKind::Empirical ? static_cast<std::size_t>(categories) : bounds.size();
  if (params.theta.size() != expected) {
    std::ostringstream msg;
    msg << "model '" << model_name(kind) << "' expects " << expected << " parameters, got "
        << params.theta.size();
    throw DomainError(msg.str());
  }
  if (kind == ModelKind::Empirical) return;
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    const double x = params.theta[i];
    const double slack = kBoundSlack * std::max(1.0, std::abs(bounds[i].high));
    if (!(x >= bounds[i].low - slack && x <= bounds[i].high + slack)) {
      std::ostringstream msg;
      msg << "parameter " << i + 1 << " of model '" << model_name(kind) << "' is " << x << ", outside ["
          << bounds[i].low << ", " << bounds[i].high << "]";
      throw DomainError(msg.str());
    }
  }
}

}  // namespace

std::string_view model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::QuantizedNormal: return "normal";
    case ModelKind::QuantizedLogistic: return "logistic";
    case ModelKind::QuantizedLogitLogistic: return "logit-logistic";
    case ModelKind::QuantizedBeta: return "beta";
    case ModelKind::MaxEntropy: return "maxentropy";
    case ModelKind::Gsd: return "gsd";
    case ModelKind::Empirical: return "empirical";
  }
  throw std::logic_error("unhandled model kind");
}

ModelKind parse_model(std::string_view name) {
  for (auto kind : kAll) {
    if (model_name(kind) == name) return kind;
  }
  std::string msg = "unknown model '" + std::string(name) + "'; valid models:";
  for (auto kind : kAll) msg += " " + std::string(model_name(kind));
  throw std::invalid_argument(msg);
}

std::span<const ModelKind> all_models() { return kAll; }

std::span<const ModelKind> parametric_models() { return std::span<const ModelKind>(kAll).first(6); }

std::optional<LatentKind> latent_kind(ModelKind kind) {
  switch (kind) {
    case ModelKind::QuantizedNormal: return LatentKind::Normal;
    case ModelKind::QuantizedLogistic: return LatentKind::Logistic;
    case ModelKind::QuantizedLogitLogistic: return LatentKind::LogitLogistic;
    case ModelKind::QuantizedBeta: return LatentKind::Beta;
    default: return std::nullopt;
  }
}

bool is_latent(ModelKind kind) { return latent_kind(kind).has_value(); }

int parameter_count(ModelKind kind, int categories) {
  return kind == ModelKind::Empirical ? categories - 1 : 2;
}

std::vector<Bound> param_bounds(ModelKind kind, int categories) {
  switch (kind) {
    case ModelKind::QuantizedNormal:
    case ModelKind::QuantizedLogistic:
    case ModelKind::QuantizedLogitLogistic:
      return {{-50.0, 50.0}, {1e-6, 1e3}};
    case ModelKind::QuantizedBeta:
      return {{1e-6, 1e6}, {1e-6, 1e6}};
    case ModelKind::MaxEntropy:
    case ModelKind::Gsd:
      return {{1.0, static_cast<double>(categories)}, {0.0, 1.0}};
    case ModelKind::Empirical:
      return std::vector<Bound>(categories - 1, Bound{0.0, 1.0});
  }
  throw std::logic_error("unhandled model kind");
}

double gsd_dispersion_threshold(double psi, int categories) {
  const auto b = variance_bounds(psi, categories);
  const double span = b.v_max - b.v_min;
  if (!(span > 0.0)) return 1.0;
  return (b.v_max - b.v_max / (categories - 1)) / span;
}

Pmf gsd_pmf(double psi, double rho, int categories) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("rho must lie in [0, 1]");
  const auto bounds = variance_bounds(psi, categories);
  const double top = static_cast<double>(categories);
  psi = std::clamp(psi, 1.0, top);
  if (psi == 1.0 || psi == top) return Pmf::point_mass(categories, static_cast<int>(psi));

  const int trials = categories - 1;
  const double p = (psi - 1.0) / trials;
  const double c = gsd_dispersion_threshold(psi, categories);
  std::vector<double> probs;
  if (rho >= c) {
    // Underdispersed: binomial mixed with the minimal-variance PMF.
    const double w = c < 1.0 ? (1.0 - rho) / (1.0 - c) : 1.0;
    probs = binomial_probs(trials, p);
    for (double& x : probs) x *= w;
    for (int k = 1; k <= categories; ++k) probs[k - 1] += (1.0 - w) * std::max(0.0, 1.0 - std::abs(k - psi));
  } else {
    // Overdispersed: beta-binomial with intra-class correlation omega.
    const double v = bounds.v_max - rho * (bounds.v_max - bounds.v_min);
    const double v_binomial = bounds.v_max / trials;
    const double omega = (v / v_binomial - 1.0) / (trials - 1);
    if (omega >= 1.0) {
      probs.assign(categories, 0.0);
      probs.front() = (top - psi) / trials;
      probs.back() = (psi - 1.0) / trials;
    } else if (omega <= 0.0) {
      probs = binomial_probs(trials, p);
    } else {
      probs = beta_binomial_probs(trials, p, 1.0 / omega - 1.0);
    }
  }
  return Pmf::from_weights(std::move(probs));
}

Pmf pmf_of(ModelKind kind, const ModelParams& params, int categories) {
  check_theta(kind, params, categories);
  const auto& t = params.theta;
  switch (kind) {
    case ModelKind::QuantizedNormal:
    case ModelKind::QuantizedLogistic:
    case ModelKind::QuantizedLogitLogistic:
    case ModelKind::QuantizedBeta: {
      const LatentKind lk = *latent_kind(kind);
      return quantize(lk, LatentParams{t[0], t[1]}, default_thresholds(lk, categories));
    }
    case ModelKind::MaxEntropy:
      return maxent_pmf(t[0], std::clamp(t[1], 0.0, 1.0), categories).pmf;
    case ModelKind::Gsd:
      return gsd_pmf(t[0], std::clamp(t[1], 0.0, 1.0), categories);
    case ModelKind::Empirical:
      return Pmf(t);
  }
  throw std::logic_error("unhandled model kind");
}

}  // namespace acr
