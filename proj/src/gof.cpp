#include "acr/gof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "acr/special.hpp"

namespace acr {

namespace {

// Linear interpolation between order statistics (the common "type 7" rule).
double percentile(std::vector<double>& values, double q) {
  std::sort(values.begin(), values.end());
  const double pos = q * (values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - lo;
  if (frac == 0.0 || values[lo] == values[hi]) return values[lo];
  return values[lo] + frac * (values[hi] - values[lo]);
}

struct Totals {
  double g_sum = 0.0;
  double aic_sum = 0.0;
};

}  // namespace

double g_test(const RatingCounts& observed, const Pmf& model) {
  if (observed.categories() != model.categories()) throw DomainError("counts and model differ in categories");
  if (observed.total() < 1) throw DomainError("G-test needs at least one observation");
  const double n = static_cast<double>(observed.total());
  double g = 0.0;
  for (int i = 0; i < observed.categories(); ++i) {
    const double o = static_cast<double>(observed[i]);
    if (o == 0.0) continue;
    if (model[i] == 0.0) return std::numeric_limits<double>::infinity();
    g += o * std::log(o / (n * model[i]));
  }
  return std::max(0.0, 2.0 * g);
}

double chi2_pvalue(double g, int df) {
  if (df < 1) throw DomainError("chi-squared needs df >= 1");
  if (!(g >= 0.0)) throw DomainError("chi-squared statistic must be non-negative");
  if (std::isinf(g)) return 0.0;
  return special::gamma_q(0.5 * df, 0.5 * g);
}

double chi2_cdf(double g, int df) {
  if (df < 1) throw DomainError("chi-squared needs df >= 1");
  if (g <= 0.0) return 0.0;
  if (std::isinf(g)) return 1.0;
  return special::gamma_p(0.5 * df, 0.5 * g);
}

double aic(double neg_log_likelihood, int n_params) {
  if (n_params < 0) throw DomainError("parameter count must be non-negative");
  return 2.0 * n_params + 2.0 * neg_log_likelihood;
}

int gof_degrees_of_freedom(int categories, int n_params) {
  const int df = categories - 1 - n_params;
  if (df < 1) throw DomainError("model leaves no degrees of freedom for the G-test");
  return df;
}

GofRecord make_gof_record(std::string stimulus_id, const RatingCounts& observed, const FitResult& fit) {
  const int k = observed.categories();
  const int n_params = parameter_count(fit.kind, k);
  GofRecord r;
  r.stimulus_id = std::move(stimulus_id);
  r.kind = fit.kind;
  r.g_stat = g_test(observed, fit.pmf);
  r.p_value = fit.kind == ModelKind::Empirical ? 1.0 : chi2_pvalue(r.g_stat, gof_degrees_of_freedom(k, n_params));
  r.aic_contribution = aic(fit.neg_log_likelihood, n_params);
  return r;
}

GofSummary summarize(std::span<const GofRecord> records, int n_boot, std::uint64_t seed) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  if (n_boot < 0) throw std::invalid_argument("summarize: n_boot must be non-negative");
  GofSummary s;
  s.kind = records.front().kind;
  s.n_stimuli = records.size();
  Totals t;
  std::size_t rejected = 0;
  for (const auto& r : records) {
    if (r.kind != s.kind) throw std::invalid_argument("summarize: records mix model kinds");
    t.g_sum += r.g_stat;
    t.aic_sum += r.aic_contribution;
    if (r.p_value < 0.05) ++rejected;
  }
  const double n = static_cast<double>(records.size());
  s.mean_g.value = t.g_sum / n;
  s.aic_total.value = t.aic_sum;
  s.ratio_p_lt_05 = rejected / n;
  if (n_boot == 0) return s;

  Rng rng(seed);
  std::vector<double> g_means(n_boot), aic_totals(n_boot);
  for (int b = 0; b < n_boot; ++b) {
    Totals boot;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& r = records[uniform_index(rng, records.size())];
      boot.g_sum += r.g_stat;
      boot.aic_sum += r.aic_contribution;
    }
    g_means[b] = boot.g_sum / n;
    aic_totals[b] = boot.aic_sum;
  }
  auto interval = [](Estimate& e, std::vector<double>& values) {
    e.low = std::min(percentile(values, 0.025), e.value);
    e.high = std::max(percentile(values, 0.975), e.value);
  };
  interval(s.mean_g, g_means);
  interval(s.aic_total, aic_totals);
  return s;
}

std::vector<CurvePoint> g_cdf_curve(std::span<const GofRecord> records, std::span<const double> grid, int df) {
  if (!std::is_sorted(grid.begin(), grid.end())) throw std::invalid_argument("g_cdf_curve: grid must be sorted");
  std::vector<double> g;
  g.reserve(records.size());
  for (const auto& r : records) g.push_back(r.g_stat);
  std::sort(g.begin(), g.end());
  std::vector<CurvePoint> out;
  out.reserve(grid.size());
  for (double x : grid) {
    const auto below = std::upper_bound(g.begin(), g.end(), x) - g.begin();
    const double fraction = g.empty() ? 0.0 : static_cast<double>(below) / g.size();
    out.push_back({x, fraction, chi2_cdf(x, df)});
  }
  return out;
}

}  // namespace acr
