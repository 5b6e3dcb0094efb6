#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "acr/fit.hpp"
#include "acr/models.hpp"
#include "acr/pmf.hpp"

namespace acr {

// G = 2 sum O_k ln(O_k / (n q_k)); empty categories contribute 0, an observed
// category with q_k = 0 gives +infinity.
double g_test(const RatingCounts& observed, const Pmf& model);

// Upper tail of the chi-squared law, Q(df/2, g/2). For df = 2 this is exp(-g/2).
double chi2_pvalue(double g, int df);
double chi2_cdf(double g, int df);

// 2 k + 2 nll.
double aic(double neg_log_likelihood, int n_params);

// (K - 1) - n_params: 2 for a two-parameter model on five categories.
int gof_degrees_of_freedom(int categories, int n_params);

struct GofRecord {
  std::string stimulus_id;
  ModelKind kind = ModelKind::QuantizedNormal;
  double g_stat = 0.0;
  double p_value = 1.0;
  double aic_contribution = 0.0;

  bool operator==(const GofRecord&) const = default;
};

GofRecord make_gof_record(std::string stimulus_id, const RatingCounts& observed, const FitResult& fit);

// A point estimate with an optional 95% percentile-bootstrap interval.
struct Estimate {
  double value = 0.0;
  std::optional<double> low;
  std::optional<double> high;

  bool operator==(const Estimate&) const = default;
};

struct GofSummary {
  ModelKind kind = ModelKind::QuantizedNormal;
  std::size_t n_stimuli = 0;
  Estimate mean_g;
  Estimate aic_total;
  // Fraction of records with p < 0.05; infinite G counts as rejected.
  double ratio_p_lt_05 = 0.0;

  bool operator==(const GofSummary&) const = default;
};

// Resamples stimuli with replacement n_boot times; n_boot = 0 gives point
// estimates only. All records must share one model kind.
GofSummary summarize(std::span<const GofRecord> records, int n_boot = 1000, std::uint64_t seed = 0);

struct CurvePoint {
  double g = 0.0;
  double fraction = 0.0;   // empirical CDF of the records' G statistics
  double reference = 0.0;  // chi-squared CDF at g

  bool operator==(const CurvePoint&) const = default;
};

std::vector<CurvePoint> g_cdf_curve(std::span<const GofRecord> records, std::span<const double> grid, int df = 2);

}  // namespace acr
