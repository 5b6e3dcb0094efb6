#include "acr/predict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "acr/parallel.hpp"

namespace acr {

std::vector<int> TrialConfig::default_sample_sizes() {
  std::vector<int> sizes(31);
  std::iota(sizes.begin(), sizes.end(), 10);
  return sizes;
}

std::pair<RatingCounts, RatingCounts> split_without_replacement(const RatingCounts& counts, std::int64_t n,
                                                                Rng& rng) {
  if (n < 0 || n > counts.total()) throw DomainError("training sample larger than the stimulus' ratings");
  std::vector<std::int64_t> rest(counts.values().begin(), counts.values().end());
  std::vector<std::int64_t> train(rest.size(), 0);
  std::int64_t remaining = counts.total();
  for (std::int64_t draw = 0; draw < n; ++draw) {
    auto pick = static_cast<std::int64_t>(uniform_index(rng, static_cast<std::uint64_t>(remaining)));
    std::size_t cat = 0;
    while (pick >= rest[cat]) pick -= rest[cat++];
    --rest[cat];
    ++train[cat];
    --remaining;
  }
  return {RatingCounts(std::move(train)), RatingCounts(std::move(rest))};
}

double cohens_d(std::span<const double> paired_diffs) {
  if (paired_diffs.size() < 2) throw DomainError("Cohen's d needs at least 2 paired differences");
  const double n = static_cast<double>(paired_diffs.size());
  const double mean = std::accumulate(paired_diffs.begin(), paired_diffs.end(), 0.0) / n;
  double ss = 0.0;
  for (double d : paired_diffs) ss += (d - mean) * (d - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  if (sd == 0.0) {
    if (mean == 0.0) return 0.0;
    return mean > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  return mean / sd;
}

std::vector<double> isotonic_nonincreasing(std::span<const double> values) {
  // Blocks of (sum, size); merge while a later block mean exceeds an earlier one.
  std::vector<std::pair<double, std::size_t>> blocks;
  for (double v : values) {
    blocks.emplace_back(v, 1);
    while (blocks.size() > 1) {
      auto& last = blocks.back();
      auto& prev = blocks[blocks.size() - 2];
      if (last.first / last.second <= prev.first / prev.second) break;
      prev.first += last.first;
      prev.second += last.second;
      blocks.pop_back();
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& [sum, size] : blocks) out.insert(out.end(), size, sum / size);
  return out;
}

namespace {

double interpolate(std::span<const CurvePointN> curve, double n) {
  if (curve.empty()) throw DomainError("empty curve");
  if (n < curve.front().n || n > curve.back().n) throw DomainError("sample size outside the curve's range");
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    if (n <= curve[i + 1].n) {
      const double t = (n - curve[i].n) / (curve[i + 1].n - curve[i].n);
      return curve[i].error + t * (curve[i + 1].error - curve[i].error);
    }
  }
  return curve.back().error;
}

}  // namespace

Gain gain(std::span<const CurvePointN> model_curve, std::span<const CurvePointN> empirical_curve, double n) {
  if (empirical_curve.empty()) throw DomainError("empty empirical curve");
  const double target = interpolate(model_curve, n);
  std::vector<double> raw;
  for (const auto& p : empirical_curve) raw.push_back(p.error);
  const auto smooth = isotonic_nonincreasing(raw);

  if (target > smooth.front()) return {empirical_curve.front().n - n, true};
  if (target < smooth.back()) return {empirical_curve.back().n - n, true};
  for (std::size_t i = 0; i < smooth.size(); ++i) {
    if (smooth[i] == target) return {empirical_curve[i].n - n, false};
    if (i + 1 < smooth.size() && smooth[i] > target && target >= smooth[i + 1]) {
      const double t = (smooth[i] - target) / (smooth[i] - smooth[i + 1]);
      const double at = empirical_curve[i].n + t * (empirical_curve[i + 1].n - empirical_curve[i].n);
      return {at - n, false};
    }
  }
  return {empirical_curve.back().n - n, true};
}

PredictionReport run_trials(const Dataset& dataset, const TrialConfig& config) {
  if (config.sample_sizes.empty()) throw std::invalid_argument("run_trials: no sample sizes");
  if (config.n_trials < 1) throw std::invalid_argument("run_trials: n_trials must be positive");
  if (config.metrics.empty()) throw std::invalid_argument("run_trials: no metrics");
  for (int n : config.sample_sizes) {
    if (n < 1) throw std::invalid_argument("run_trials: sample sizes must be positive");
  }
  const int n_max = *std::max_element(config.sample_sizes.begin(), config.sample_sizes.end());

  PredictionReport report;
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < dataset.stimuli.size(); ++i) {
    if (dataset.stimuli[i].counts.total() > n_max) eligible.push_back(i);
    else ++report.skipped_stimuli;
  }
  if (eligible.empty()) throw std::invalid_argument("run_trials: no stimulus has more ratings than the largest sample size");

  // The empirical model is always evaluated and kept last.
  std::vector<ModelKind> kinds;
  for (auto k : config.kinds) {
    if (k != ModelKind::Empirical && std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
  }
  kinds.push_back(ModelKind::Empirical);
  const std::size_t n_kinds = kinds.size();
  const std::size_t n_metrics = config.metrics.size();
  const std::size_t per_trial = n_kinds * n_metrics;
  const std::size_t n_sizes = config.sample_sizes.size();
  const auto trials = static_cast<std::size_t>(config.n_trials);

  std::vector<double> errors(n_sizes * trials * per_trial);
  std::vector<std::size_t> picked(n_sizes * trials);
  parallel_for(n_sizes * trials, config.threads, [&](std::size_t job) {
    const std::size_t si = job / trials;
    const std::size_t t = job % trials;
    const int n = config.sample_sizes[si];
    const std::uint64_t seed = mix_seed(mix_seed(config.seed, static_cast<std::uint64_t>(n)), t);
    Rng rng(seed);
    const std::size_t stimulus = eligible[uniform_index(rng, eligible.size())];
    picked[job] = stimulus;
    const auto [train, test] = split_without_replacement(dataset.stimuli[stimulus].counts, n, rng);
    const Pmf reference = normalize(test);
    FitOptions fit_options = config.fit;
    fit_options.seed = seed;
    double* out = &errors[job * per_trial];
    for (std::size_t ki = 0; ki < n_kinds; ++ki) {
      const Pmf model = fit(kinds[ki], train, fit_options).pmf;
      for (std::size_t mi = 0; mi < n_metrics; ++mi) {
        out[ki * n_metrics + mi] = distance(model, reference, config.metrics[mi]);
      }
    }
  });

  const std::size_t empirical = n_kinds - 1;
  std::vector<double> diffs(trials);
  for (std::size_t si = 0; si < n_sizes; ++si) {
    TrialResult result;
    result.n = config.sample_sizes[si];
    result.trials = config.n_trials;
    for (std::size_t ki = 0; ki < n_kinds; ++ki) {
      for (std::size_t mi = 0; mi < n_metrics; ++mi) {
        MetricSummary m;
        m.kind = kinds[ki];
        m.metric = config.metrics[mi];
        double sum = 0.0, sum_emp = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
          const double* row = &errors[(si * trials + t) * per_trial];
          const double e = row[ki * n_metrics + mi];
          const double e_emp = row[empirical * n_metrics + mi];
          sum += e;
          sum_emp += e_emp;
          diffs[t] = e_emp - e;
        }
        m.mean_error = sum / trials;
        m.mean_empirical_error = sum_emp / trials;
        m.diff_mean = std::accumulate(diffs.begin(), diffs.end(), 0.0) / trials;
        if (trials >= 2) {
          double ss = 0.0;
          for (double d : diffs) ss += (d - m.diff_mean) * (d - m.diff_mean);
          m.diff_std = std::sqrt(ss / (trials - 1.0));
          m.cohens_d = cohens_d(diffs);
        } else {
          m.diff_std = std::numeric_limits<double>::quiet_NaN();
          m.cohens_d = std::numeric_limits<double>::quiet_NaN();
        }
        result.entries.push_back(m);
      }
    }
    report.results.push_back(std::move(result));
  }

  if (config.keep_raw) {
    report.raw.reserve(errors.size());
    for (std::size_t si = 0; si < n_sizes; ++si) {
      for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t job = si * trials + t;
        for (std::size_t ki = 0; ki < n_kinds; ++ki) {
          for (std::size_t mi = 0; mi < n_metrics; ++mi) {
            report.raw.push_back({config.sample_sizes[si], static_cast<int>(t), picked[job], kinds[ki],
                                  config.metrics[mi], errors[job * per_trial + ki * n_metrics + mi]});
          }
        }
      }
    }
  }
  return report;
}

std::vector<PredictionRow> prediction_table(const PredictionReport& report) {
  std::vector<PredictionRow> rows;
  for (const auto& r : report.results) {
    for (const auto& e : r.entries) {
      PredictionRow row;
      row.n = r.n;
      row.kind = e.kind;
      row.metric = e.metric;
      row.mean_error = e.mean_error;
      row.empirical_error = e.mean_empirical_error;
      row.diff_mean = e.diff_mean;
      row.diff_std = e.diff_std;
      row.cohens_d = e.cohens_d;
      rows.push_back(row);
    }
  }
  // Curves per (kind, metric), ordered by n.
  for (auto& row : rows) {
    if (row.kind == ModelKind::Empirical) {
      row.gain = 0.0;
      row.gain_censored = false;
      continue;
    }
    std::vector<CurvePointN> model, empirical;
    for (const auto& other : rows) {
      if (other.kind == row.kind && other.metric == row.metric) {
        model.push_back({static_cast<double>(other.n), other.mean_error});
        empirical.push_back({static_cast<double>(other.n), other.empirical_error});
      }
    }
    auto by_n = [](const CurvePointN& a, const CurvePointN& b) { return a.n < b.n; };
    std::sort(model.begin(), model.end(), by_n);
    std::sort(empirical.begin(), empirical.end(), by_n);
    if (model.size() < 2 || std::adjacent_find(model.begin(), model.end(), [](auto& a, auto& b) {
                              return a.n == b.n;
                            }) != model.end()) {
      row.gain = std::numeric_limits<double>::quiet_NaN();
      row.gain_censored = true;
      continue;
    }
    const Gain g = gain(model, empirical, row.n);
    row.gain = g.value;
    row.gain_censored = g.censored;
  }
  return rows;
}

}  // namespace acr
