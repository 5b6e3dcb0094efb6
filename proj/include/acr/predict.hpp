#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "acr/fit.hpp"
#include "acr/dataset.hpp"
#include "acr/models.hpp"
#include "acr/pmf.hpp"

namespace acr {

struct TrialConfig {
  std::vector<int> sample_sizes = default_sample_sizes();
  int n_trials = 10000;
  // Parametric models to compare with the empirical model.
  std::vector<ModelKind> kinds = {ModelKind::QuantizedLogitLogistic};
  std::vector<Metric> metrics = {Metric::Linf};
  std::uint64_t seed = 0;
  FitOptions fit;
  bool keep_raw = false;
  // 0 = hardware concurrency. Results do not depend on the thread count.
  unsigned threads = 0;

  static std::vector<int> default_sample_sizes();
};

// Mean error of one model under one metric at one sample size, and the
// paired per-trial differences (empirical error - model error).
struct MetricSummary {
  ModelKind kind = ModelKind::Empirical;
  Metric metric = Metric::Linf;
  double mean_error = 0.0;
  double mean_empirical_error = 0.0;
  double diff_mean = 0.0;
  double diff_std = 0.0;
  double cohens_d = 0.0;

  bool operator==(const MetricSummary&) const = default;
};

struct TrialResult {
  int n = 0;
  int trials = 0;
  std::vector<MetricSummary> entries;

  bool operator==(const TrialResult&) const = default;
};

struct TrialRecord {
  int n = 0;
  int trial = 0;
  std::size_t stimulus = 0;
  ModelKind kind = ModelKind::Empirical;
  Metric metric = Metric::Linf;
  double error = 0.0;

  bool operator==(const TrialRecord&) const = default;
};

struct PredictionReport {
  std::vector<TrialResult> results;
  // Stimuli with no more ratings than the largest sample size.
  std::size_t skipped_stimuli = 0;
  std::vector<TrialRecord> raw;
};

// For every sample size and trial: draw a stimulus uniformly among the
// eligible ones, split its ratings into a simple random training sample of
// size n (without replacement) and the held-out rest, fit each model on the
// training counts and measure the distance to the held-out empirical PMF.
// Deterministic for a fixed seed regardless of thread count.
PredictionReport run_trials(const Dataset& dataset, const TrialConfig& config);

// Splits counts into a training sample of size n drawn without replacement
// and the remainder.
std::pair<RatingCounts, RatingCounts> split_without_replacement(const RatingCounts& counts, std::int64_t n, Rng& rng);

// mean / sample standard deviation (n - 1). Zero spread with a nonzero mean
// gives +-infinity; zero spread and zero mean gives 0.
double cohens_d(std::span<const double> paired_diffs);

// Pool-adjacent-violators fit of a nonincreasing sequence (equal weights).
std::vector<double> isotonic_nonincreasing(std::span<const double> values);

struct CurvePointN {
  double n = 0.0;
  double error = 0.0;
};

struct Gain {
  double value = 0.0;
  // True when the target error lies outside the empirical curve's range; the
  // value is then the bound reached at the curve end.
  bool censored = false;
};

// Extra ratings the empirical model needs to match the model's error at n:
// n' - n, where the (isotonically smoothed, linearly interpolated) empirical
// curve reaches model_error(n) at n'.
Gain gain(std::span<const CurvePointN> model_curve, std::span<const CurvePointN> empirical_curve, double n);

// One output row per (n, model, metric) with the effect size and gain against
// the empirical model. Gains use each (model, metric) curve over all n; the
// empirical rows have gain 0 by definition.
struct PredictionRow {
  int n = 0;
  ModelKind kind = ModelKind::Empirical;
  Metric metric = Metric::Linf;
  double mean_error = 0.0;
  double empirical_error = 0.0;
  double diff_mean = 0.0;
  double diff_std = 0.0;
  double cohens_d = 0.0;
  double gain = 0.0;
  bool gain_censored = false;

  bool operator==(const PredictionRow&) const = default;
};

std::vector<PredictionRow> prediction_table(const PredictionReport& report);

}  // namespace acr
