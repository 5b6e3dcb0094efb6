#include "acr/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace acr {

namespace {

using nlohmann::json;

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : std::string(); }

json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json num(const std::optional<double>& x) { return x ? num(*x) : json(nullptr); }

double get_num(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ParseError("expected a number, got " + j.dump(), 0);
}

std::optional<double> get_opt(const json& j) {
  if (j.is_null()) return std::nullopt;
  return get_num(j);
}

std::vector<double> get_vec(const json& j) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(get_num(x));
  return out;
}

json vec(std::span<const double> xs) {
  json a = json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("error writing " + path.string());
}

void write_json(const json& j, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

template <typename T, typename ToJson>
void write_json_rows(std::span<const T> rows, const std::filesystem::path& path, ToJson to_json) {
  json a = json::array();
  for (const auto& r : rows) a.push_back(to_json(r));
  write_json(a, path);
}

json gof_record_json(const GofRecord& r) {
  return {{"stimulus_id", r.stimulus_id},
          {"model", model_name(r.kind)},
          {"g", num(r.g_stat)},
          {"p_value", num(r.p_value)},
          {"aic", num(r.aic_contribution)}};
}

json gof_summary_json(const GofSummary& s) {
  return {{"model", model_name(s.kind)},         {"n_stimuli", s.n_stimuli},
          {"aic", num(s.aic_total.value)},       {"aic_lo", num(s.aic_total.low)},
          {"aic_hi", num(s.aic_total.high)},     {"g_mean", num(s.mean_g.value)},
          {"g_lo", num(s.mean_g.low)},           {"g_hi", num(s.mean_g.high)},
          {"ratio_p_lt_05", num(s.ratio_p_lt_05)}};
}

json prediction_row_json(const PredictionRow& r) {
  return {{"n", r.n},
          {"model", model_name(r.kind)},
          {"metric", metric_name(r.metric)},
          {"mean_error", num(r.mean_error)},
          {"empirical_error", num(r.empirical_error)},
          {"diff_mean", num(r.diff_mean)},
          {"diff_std", num(r.diff_std)},
          {"cohens_d", num(r.cohens_d)},
          {"gain", num(r.gain)},
          {"gain_censored", r.gain_censored}};
}

json fit_record_json(const FitRecord& r) {
  return {{"stimulus_id", r.stimulus_id},
          {"model", model_name(r.fit.kind)},
          {"theta", vec(r.fit.theta.theta)},
          {"pmf", vec(r.fit.pmf.probs())},
          {"nll", num(r.fit.neg_log_likelihood)},
          {"converged", r.fit.converged},
          {"iterations", r.fit.iterations},
          {"g", num(r.g_stat)},
          {"p_value", num(r.p_value)}};
}

}  // namespace

ReportFormat format_for(const std::filesystem::path& path) {
  return path.extension() == ".json" ? ReportFormat::Json : ReportFormat::Csv;
}

void write_report(std::span<const FitRecord> rows, const std::filesystem::path& path, ReportFormat format) {
  if (format == ReportFormat::Json) return write_json_rows(rows, path, fit_record_json);
  auto out = open_out(path);
  const int k = rows.empty() ? kDefaultCategories : rows.front().fit.pmf.categories();
  out << "stimulus_id,model,theta1,theta2,psi,rho,nll,g,p_value,converged,iterations";
  for (int i = 1; i <= k; ++i) out << ",p" << i;
  out << '\n';
  for (const auto& r : rows) {
    const Moments m = moments(r.fit.pmf);
    const bool two = r.fit.theta.theta.size() == 2;
    out << r.stimulus_id << ',' << model_name(r.fit.kind) << ',' << (two ? fmt(r.fit.theta.theta[0]) : "") << ','
        << (two ? fmt(r.fit.theta.theta[1]) : "") << ',' << fmt(m.psi) << ',' << fmt(m.rho) << ','
        << fmt(r.fit.neg_log_likelihood) << ',' << fmt(r.g_stat) << ',' << fmt(r.p_value) << ','
        << (r.fit.converged ? 1 : 0) << ',' << r.fit.iterations;
    for (double p : r.fit.pmf.probs()) out << ',' << fmt(p);
    out << '\n';
  }
  finish(out, path);
}

void write_report(std::span<const GofRecord> rows, const std::filesystem::path& path, ReportFormat format) {
  if (format == ReportFormat::Json) return write_json_rows(rows, path, gof_record_json);
  auto out = open_out(path);
  out << "stimulus_id,model,g,p_value,aic\n";
  for (const auto& r : rows) {
    out << r.stimulus_id << ',' << model_name(r.kind) << ',' << fmt(r.g_stat) << ',' << fmt(r.p_value) << ','
        << fmt(r.aic_contribution) << '\n';
  }
  finish(out, path);
}

void write_report(std::span<const GofSummary> rows, const std::filesystem::path& path, ReportFormat format) {
  if (format == ReportFormat::Json) return write_json_rows(rows, path, gof_summary_json);
  auto out = open_out(path);
  out << "model,n_stimuli,aic,aic_lo,aic_hi,g_mean,g_lo,g_hi,ratio_p_lt_05\n";
  for (const auto& s : rows) {
    out << model_name(s.kind) << ',' << s.n_stimuli << ',' << fmt(s.aic_total.value) << ',' << fmt(s.aic_total.low)
        << ',' << fmt(s.aic_total.high) << ',' << fmt(s.mean_g.value) << ',' << fmt(s.mean_g.low) << ','
        << fmt(s.mean_g.high) << ',' << fmt(s.ratio_p_lt_05) << '\n';
  }
  finish(out, path);
}

void write_report(std::span<const PredictionRow> rows, const std::filesystem::path& path, ReportFormat format) {
  if (format == ReportFormat::Json) return write_json_rows(rows, path, prediction_row_json);
  auto out = open_out(path);
  out << "n,model,metric,mean_error,empirical_error,diff_mean,diff_std,cohens_d,gain,gain_censored\n";
  for (const auto& r : rows) {
    out << r.n << ',' << model_name(r.kind) << ',' << metric_name(r.metric) << ',' << fmt(r.mean_error) << ','
        << fmt(r.empirical_error) << ',' << fmt(r.diff_mean) << ',' << fmt(r.diff_std) << ',' << fmt(r.cohens_d)
        << ',' << fmt(r.gain) << ',' << (r.gain_censored ? 1 : 0) << '\n';
  }
  finish(out, path);
}

void write_report(std::span<const TrialRecord> rows, const std::filesystem::path& path, ReportFormat format) {
  if (format == ReportFormat::Json) {
    return write_json_rows(rows, path, [](const TrialRecord& r) {
      return json{{"n", r.n},
                  {"trial", r.trial},
                  {"stimulus", r.stimulus},
                  {"model", model_name(r.kind)},
                  {"metric", metric_name(r.metric)},
                  {"error", num(r.error)}};
    });
  }
  auto out = open_out(path);
  out << "n,trial,stimulus,model,metric,error\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.trial << ',' << r.stimulus << ',' << model_name(r.kind) << ',' << metric_name(r.metric)
        << ',' << fmt(r.error) << '\n';
  }
  finish(out, path);
}

void write_report(const PcaReport& report, const std::filesystem::path& path, ReportFormat format) {
  if (format == ReportFormat::Json) {
    return write_json({{"eigenvalues", vec(report.eigenvalues)},
                       {"explained_variance_cumulative", vec(report.explained_variance_cumulative)},
                       {"degenerate", report.degenerate},
                       {"standardized", report.standardized}},
                      path);
  }
  auto out = open_out(path);
  out << "component,eigenvalue,cumulative_explained\n";
  for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) {
    out << i + 1 << ',' << fmt(report.eigenvalues[i]) << ',' << fmt(report.explained_variance_cumulative[i]) << '\n';
  }
  finish(out, path);
}

void write_report(std::span<const QuantileRecord> rows, const std::filesystem::path& path, ReportFormat format) {
  if (format == ReportFormat::Json) {
    return write_json_rows(rows, path, [](const QuantileRecord& r) {
      return json{{"stimulus_id", r.stimulus_id},
                  {"model", model_name(r.kind)},
                  {"alpha", num(r.row.alpha)},
                  {"latent", num(r.row.latent)},
                  {"rescaled", num(r.row.rescaled)}};
    });
  }
  auto out = open_out(path);
  out << "stimulus_id,model,alpha,latent,rescaled\n";
  for (const auto& r : rows) {
    out << r.stimulus_id << ',' << model_name(r.kind) << ',' << fmt(r.row.alpha) << ',' << fmt(r.row.latent) << ','
        << fmt(r.row.rescaled) << '\n';
  }
  finish(out, path);
}

void write_report(const GCurveTable& table, const std::filesystem::path& path, ReportFormat format) {
  if (format == ReportFormat::Json) {
    json curves = json::object();
    for (std::size_t m = 0; m < table.kinds.size(); ++m) curves[std::string(model_name(table.kinds[m]))] = vec(table.fractions[m]);
    return write_json({{"g", vec(table.grid)}, {"chi2_reference", vec(table.reference)}, {"models", curves}}, path);
  }
  auto out = open_out(path);
  out << "g,chi2_reference";
  for (auto k : table.kinds) out << ',' << model_name(k);
  out << '\n';
  for (std::size_t i = 0; i < table.grid.size(); ++i) {
    out << fmt(table.grid[i]) << ',' << fmt(table.reference[i]);
    for (const auto& f : table.fractions) out << ',' << fmt(f[i]);
    out << '\n';
  }
  finish(out, path);
}

std::vector<GofRecord> read_gof_records_json(const std::filesystem::path& path) {
  std::vector<GofRecord> out;
  for (const auto& j : read_json(path)) {
    out.push_back({j.at("stimulus_id").get<std::string>(), parse_model(j.at("model").get<std::string>()),
                   get_num(j.at("g")), get_num(j.at("p_value")), get_num(j.at("aic"))});
  }
  return out;
}

std::vector<GofSummary> read_gof_summaries_json(const std::filesystem::path& path) {
  std::vector<GofSummary> out;
  for (const auto& j : read_json(path)) {
    GofSummary s;
    s.kind = parse_model(j.at("model").get<std::string>());
    s.n_stimuli = j.at("n_stimuli").get<std::size_t>();
    s.aic_total = {get_num(j.at("aic")), get_opt(j.at("aic_lo")), get_opt(j.at("aic_hi"))};
    s.mean_g = {get_num(j.at("g_mean")), get_opt(j.at("g_lo")), get_opt(j.at("g_hi"))};
    s.ratio_p_lt_05 = get_num(j.at("ratio_p_lt_05"));
    out.push_back(s);
  }
  return out;
}

std::vector<PredictionRow> read_prediction_rows_json(const std::filesystem::path& path) {
  std::vector<PredictionRow> out;
  for (const auto& j : read_json(path)) {
    PredictionRow r;
    r.n = j.at("n").get<int>();
    r.kind = parse_model(j.at("model").get<std::string>());
    r.metric = parse_metric(j.at("metric").get<std::string>());
    r.mean_error = get_num(j.at("mean_error"));
    r.empirical_error = get_num(j.at("empirical_error"));
    r.diff_mean = get_num(j.at("diff_mean"));
    r.diff_std = get_num(j.at("diff_std"));
    r.cohens_d = get_num(j.at("cohens_d"));
    r.gain = get_num(j.at("gain"));
    r.gain_censored = j.at("gain_censored").get<bool>();
    out.push_back(r);
  }
  return out;
}

std::vector<FitRecord> read_fit_records_json(const std::filesystem::path& path) {
  std::vector<FitRecord> out;
  for (const auto& j : read_json(path)) {
    FitResult fit{parse_model(j.at("model").get<std::string>()),
                  ModelParams{get_vec(j.at("theta"))},
                  Pmf::from_weights(get_vec(j.at("pmf"))),
                  get_num(j.at("nll")),
                  j.at("converged").get<bool>(),
                  j.at("iterations").get<int>()};
    out.push_back({j.at("stimulus_id").get<std::string>(), std::move(fit), get_num(j.at("g")),
                   get_num(j.at("p_value"))});
  }
  return out;
}

PcaReport read_pca_json(const std::filesystem::path& path) {
  const json j = read_json(path);
  PcaReport r;
  r.eigenvalues = get_vec(j.at("eigenvalues"));
  r.explained_variance_cumulative = get_vec(j.at("explained_variance_cumulative"));
  r.degenerate = j.at("degenerate").get<bool>();
  r.standardized = j.at("standardized").get<bool>();
  return r;
}

}  // namespace acr
