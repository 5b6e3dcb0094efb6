#include "acr/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "acr/maxent.hpp"
#include "acr/optimize.hpp"

namespace acr {

namespace {

constexpr double kProbabilityFloor = 1e-300;

// How one model's natural parameters map to the optimizer's coordinates.
struct SearchSpace {
  std::array<bool, 2> log_scale{};
  std::array<Bound, 2> natural{};      // hard box
  std::array<Bound, 2> start_region{};  // where Halton starts are placed
};

SearchSpace search_space(ModelKind kind, int categories) {
  const auto bounds = param_bounds(kind, categories);
  SearchSpace s;
  s.natural = {bounds[0], bounds[1]};
  const double top = static_cast<double>(categories);
  switch (kind) {
    case ModelKind::QuantizedNormal:
    case ModelKind::QuantizedLogistic:
      s.log_scale = {false, true};
      s.start_region = {Bound{1.0, top}, Bound{0.2, top / 2.0}};
      break;
    case ModelKind::QuantizedLogitLogistic:
      s.log_scale = {false, true};
      s.start_region = {Bound{-3.0, 3.0}, Bound{0.1, 3.0}};
      break;
    case ModelKind::QuantizedBeta:
      s.log_scale = {true, true};
      s.start_region = {Bound{0.3, 30.0}, Bound{0.3, 30.0}};
      break;
    case ModelKind::MaxEntropy:
    case ModelKind::Gsd:
      s.log_scale = {false, false};
      s.start_region = s.natural;
      break;
    case ModelKind::Empirical:
      throw std::invalid_argument("the empirical model has no search space");
  }
  return s;
}

double to_internal(const SearchSpace& s, int i, double x) { return s.log_scale[i] ? std::log(x) : x; }
double to_natural(const SearchSpace& s, int i, double y) { return s.log_scale[i] ? std::exp(y) : y; }

double logit(double u) { return std::log(u / (1.0 - u)); }

// Method-of-moments guess in natural coordinates.
std::array<double, 2> moment_start(ModelKind kind, const Pmf& empirical) {
  const int k = empirical.categories();
  const Moments m = moments(empirical);
  const double v = std::max(m.v, 0.01);
  const double unit_mean = std::clamp((m.psi - 0.5) / k, 0.02, 0.98);
  const double unit_var = v / (k * k);
  switch (kind) {
    case ModelKind::QuantizedNormal:
      return {m.psi, std::sqrt(std::max(m.v - 1.0 / 12.0, 0.01))};
    case ModelKind::QuantizedLogistic:
      return {m.psi, std::sqrt(3.0 * std::max(m.v - 1.0 / 12.0, 0.01)) / std::numbers::pi};
    case ModelKind::QuantizedLogitLogistic: {
      const double spread = std::sqrt(3.0 * unit_var) / (std::numbers::pi * unit_mean * (1.0 - unit_mean));
      return {logit(unit_mean), std::clamp(spread, 0.05, 5.0)};
    }
    case ModelKind::QuantizedBeta: {
      const double common = std::max(unit_mean * (1.0 - unit_mean) / unit_var - 1.0, 0.05);
      return {std::clamp(unit_mean * common, 1e-3, 1e4), std::clamp((1.0 - unit_mean) * common, 1e-3, 1e4)};
    }
    case ModelKind::MaxEntropy:
    case ModelKind::Gsd:
      return {m.psi, m.rho.value_or(0.5)};
    case ModelKind::Empirical:
      break;
  }
  throw std::invalid_argument("no moment start for the empirical model");
}

double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * (index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

// Evaluates the model PMF from optimizer coordinates. The maximum-entropy
// solver is warm-started from the previous multipliers.
class ModelEvaluator {
 public:
  ModelEvaluator(ModelKind kind, const SearchSpace& space, int categories)
      : kind_(kind), space_(space), categories_(categories) {}

  std::array<double, 2> natural(std::span<const double> y) const {
    std::array<double, 2> x{};
    for (int i = 0; i < 2; ++i) {
      x[i] = std::clamp(to_natural(space_, i, y[i]), space_.natural[i].low, space_.natural[i].high);
    }
    return x;
  }

  std::optional<Pmf> pmf(const std::array<double, 2>& x) {
    try {
      if (kind_ == ModelKind::MaxEntropy) {
        MaxEntOptions opts;
        opts.lambda1_init = lambda1_;
        opts.lambda2_init = lambda2_;
        MaxEntSolution sol = solve_maxent(x, opts);
        if (sol.boundary_case == MaxEntBoundary::Interior) {
          lambda1_ = sol.lambda1;
          lambda2_ = sol.lambda2;
        }
        return std::move(sol.pmf);
      }
      return pmf_of(kind_, ModelParams{{x[0], x[1]}}, categories_);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

 private:
  MaxEntSolution solve_maxent(const std::array<double, 2>& x, const MaxEntOptions& opts) const {
    try {
      return maxent_pmf(x[0], x[1], categories_, opts);
    } catch (const ConvergenceError&) {
      return maxent_pmf(x[0], x[1], categories_);
    }
  }

  ModelKind kind_;
  SearchSpace space_;
  int categories_;
  double lambda1_ = 0.0;
  double lambda2_ = 0.0;
};

}  // namespace

double floored_cross_entropy(const Pmf& empirical, const Pmf& model) {
  double h = 0.0;
  for (int i = 0; i < empirical.categories(); ++i) {
    if (empirical[i] > 0.0) h -= empirical[i] * std::log(std::max(model[i], kProbabilityFloor));
  }
  return h;
}

double negative_log_likelihood(const RatingCounts& counts, const Pmf& model) {
  if (counts.categories() != model.categories()) throw DomainError("counts and model differ in categories");
  double nll = 0.0;
  for (int i = 0; i < counts.categories(); ++i) {
    if (counts[i] == 0) continue;
    if (model[i] == 0.0) return std::numeric_limits<double>::infinity();
    nll -= counts[i] * std::log(model[i]);
  }
  return nll;
}

FitResult mle_fit(ModelKind kind, const RatingCounts& data, const FitOptions& options) {
  if (kind == ModelKind::Empirical) throw std::invalid_argument("mle_fit: use fit_empirical for the empirical model");
  if (options.n_starts < 1 || options.max_iter < 1 || !(options.tol > 0.0)) {
    throw std::invalid_argument("mle_fit: options must be positive");
  }
  const int k = data.categories();
  const Pmf empirical = normalize(data);
  const SearchSpace space = search_space(kind, k);
  ModelEvaluator evaluator(kind, space, k);

  std::array<double, 2> low{}, high{};
  for (int i = 0; i < 2; ++i) {
    low[i] = to_internal(space, i, space.natural[i].low);
    high[i] = to_internal(space, i, space.natural[i].high);
  }
  const Objective objective = [&](std::span<const double> y) {
    const auto q = evaluator.pmf(evaluator.natural(y));
    return q ? floored_cross_entropy(empirical, *q) : std::numeric_limits<double>::infinity();
  };

  std::vector<std::vector<double>> starts;
  const auto guess = moment_start(kind, empirical);
  starts.push_back({to_internal(space, 0, guess[0]), to_internal(space, 1, guess[1])});
  const std::array<std::uint64_t, 2> bases = {2, 3};
  for (int s = 1; s < options.n_starts; ++s) {
    std::vector<double> y(2);
    for (int i = 0; i < 2; ++i) {
      const double shift = static_cast<double>(mix_seed(options.seed, i) >> 11) * 0x1.0p-53;
      double u = radical_inverse(static_cast<std::uint64_t>(s), bases[i]) + shift;
      u -= std::floor(u);
      const double lo = to_internal(space, i, space.start_region[i].low);
      const double hi = to_internal(space, i, space.start_region[i].high);
      y[i] = lo + u * (hi - lo);
    }
    starts.push_back(std::move(y));
  }

  NelderMeadOptions nm;
  nm.tol = options.tol;
  nm.max_iter = options.max_iter;
  std::optional<MinimizeResult> best;
  int iterations = 0;
  bool any_converged = false;
  for (const auto& start : starts) {
    MinimizeResult r = nelder_mead(objective, start, low, high, nm);
    iterations += r.iterations;
    any_converged = any_converged || r.converged;
    if (!std::isfinite(r.value)) continue;
    if (!best || r.value < best->value ||
        (r.value == best->value && std::lexicographical_compare(r.x.begin(), r.x.end(), best->x.begin(),
                                                                best->x.end()))) {
      best = std::move(r);
    }
  }
  if (!best || !any_converged) {
    throw ConvergenceError("mle_fit: no start converged for model '" + std::string(model_name(kind)) + "'",
                           best ? best->value : std::numeric_limits<double>::infinity());
  }

  const auto x = evaluator.natural(best->x);
  ModelParams theta{{x[0], x[1]}};
  Pmf q = pmf_of(kind, theta, k);
  const double nll = negative_log_likelihood(data, q);
  return FitResult{kind, std::move(theta), std::move(q), nll, best->converged, iterations};
}

FitResult fit_empirical(const RatingCounts& data) {
  Pmf p = normalize(data);
  ModelParams theta{std::vector<double>(p.probs().begin(), p.probs().end())};
  const double nll = negative_log_likelihood(data, p);
  return FitResult{ModelKind::Empirical, std::move(theta), std::move(p), nll, true, 0};
}

FitResult fit(ModelKind kind, const RatingCounts& data, const FitOptions& options) {
  return kind == ModelKind::Empirical ? fit_empirical(data) : mle_fit(kind, data, options);
}

}  // namespace acr
