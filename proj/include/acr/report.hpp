#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "acr/analysis.hpp"
#include "acr/dataset.hpp"
#include "acr/fit.hpp"
#include "acr/gof.hpp"
#include "acr/predict.hpp"

// Report schemas. CSV files have a header row and print reals with 6
// significant digits; JSON files are arrays of objects with the same field
// names and full double precision. Non-finite reals are written as inf, -inf
// or nan (strings in JSON); a missing optional value is an empty CSV field
// and null in JSON.

namespace acr {

enum class ReportFormat { Csv, Json };

// .json selects JSON, anything else CSV.
ReportFormat format_for(const std::filesystem::path& path);

// Per-stimulus fit: stimulus_id,model,theta1,theta2,psi,rho,nll,g,p_value,converged,iterations,p1..pK
struct FitRecord {
  std::string stimulus_id;
  FitResult fit;
  double g_stat = 0.0;
  double p_value = 1.0;
};

// Per-stimulus quantiles: stimulus_id,model,alpha,latent,rescaled
struct QuantileRecord {
  std::string stimulus_id;
  ModelKind kind = ModelKind::QuantizedNormal;
  QuantileRow row;

  bool operator==(const QuantileRecord&) const = default;
};

// G-statistic CDFs on a shared grid: g,chi2_reference,<model>...
struct GCurveTable {
  std::vector<ModelKind> kinds;
  std::vector<double> grid;
  std::vector<double> reference;
  std::vector<std::vector<double>> fractions;  // [model][grid index]

  bool operator==(const GCurveTable&) const = default;
};

void write_report(std::span<const FitRecord> rows, const std::filesystem::path& path, ReportFormat format);
// stimulus_id,model,g,p_value,aic
void write_report(std::span<const GofRecord> rows, const std::filesystem::path& path, ReportFormat format);
// model,n_stimuli,aic,aic_lo,aic_hi,g_mean,g_lo,g_hi,ratio_p_lt_05
void write_report(std::span<const GofSummary> rows, const std::filesystem::path& path, ReportFormat format);
// n,model,metric,mean_error,empirical_error,diff_mean,diff_std,cohens_d,gain,gain_censored
void write_report(std::span<const PredictionRow> rows, const std::filesystem::path& path, ReportFormat format);
// n,trial,stimulus,model,metric,error
void write_report(std::span<const TrialRecord> rows, const std::filesystem::path& path, ReportFormat format);
// component,eigenvalue,cumulative_explained
void write_report(const PcaReport& report, const std::filesystem::path& path, ReportFormat format);
void write_report(std::span<const QuantileRecord> rows, const std::filesystem::path& path, ReportFormat format);
void write_report(const GCurveTable& table, const std::filesystem::path& path, ReportFormat format);

// JSON readers, the inverse of the JSON writers above.
std::vector<GofRecord> read_gof_records_json(const std::filesystem::path& path);
std::vector<GofSummary> read_gof_summaries_json(const std::filesystem::path& path);
std::vector<PredictionRow> read_prediction_rows_json(const std::filesystem::path& path);
std::vector<FitRecord> read_fit_records_json(const std::filesystem::path& path);
PcaReport read_pca_json(const std::filesystem::path& path);

}  // namespace acr
