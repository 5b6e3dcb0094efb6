#include "acr/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <stdexcept>

#include "CLI11.hpp"
#include "acr/analysis.hpp"
#include "acr/dataset.hpp"
#include "acr/fit.hpp"
#include "acr/gof.hpp"
#include "acr/maxent.hpp"
#include "acr/parallel.hpp"
#include "acr/predict.hpp"
#include "acr/report.hpp"
#include "acr/svg.hpp"

namespace acr {

namespace {

// Raised for flag combinations that CLI11 cannot check on its own.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DataFlags {
  std::string path;
  std::string layout = "wide";
  int categories = kDefaultCategories;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--data", path, "Ratings file")->required();
    cmd->add_option("--layout", layout, "wide (stimulus_id,c1..cK) or long (stimulus_id,rating)")
        ->check(CLI::IsMember({"wide", "long"}));
    cmd->add_option("--categories", categories, "Number of rating categories for long layout")
        ->check(CLI::PositiveNumber);
  }

  Dataset load() const {
    return layout == "long" ? read_ratings_csv(path, categories) : read_counts_csv(path);
  }
};

struct SeedFlags {
  std::uint64_t seed = 0;
  CLI::Option* option = nullptr;

  void add_to(CLI::App* cmd) { option = cmd->add_option("--seed", seed, "Random seed"); }

  void require_in_ci() const {
    const char* ci = std::getenv("ACR_CI");
    if (ci && std::string(ci) == "1" && option->count() == 0) {
      throw UsageError("--seed is required when ACR_CI=1");
    }
  }
};

std::vector<ModelKind> parse_models(const std::vector<std::string>& names) {
  std::vector<ModelKind> kinds;
  for (const auto& name : names) {
    const ModelKind k = parse_model(name);
    if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
  }
  if (kinds.empty()) throw UsageError("no models given");
  return kinds;
}

FitOptions fit_options(std::uint64_t seed, int starts, std::size_t stimulus) {
  FitOptions o;
  o.seed = mix_seed(seed, stimulus);
  o.n_starts = starts;
  return o;
}

// fits[model][stimulus], computed in parallel and stored by input order.
std::vector<std::vector<std::optional<FitResult>>> fit_all(const Dataset& data, const std::vector<ModelKind>& kinds,
                                                           std::uint64_t seed, int starts, unsigned threads) {
  std::vector<std::vector<std::optional<FitResult>>> fits(kinds.size(),
                                                          std::vector<std::optional<FitResult>>(data.stimuli.size()));
  const std::size_t m = data.stimuli.size();
  parallel_for(kinds.size() * m, threads, [&](std::size_t job) {
    const std::size_t ki = job / m, si = job % m;
    fits[ki][si] = fit(kinds[ki], data.stimuli[si].counts, fit_options(seed, starts, si));
  });
  return fits;
}

void say(std::ostream& out, const std::string& what, const std::string& path) {
  out << "wrote " << what << " to " << path << '\n';
}

std::vector<double> alpha_grid() {
  std::vector<double> a;
  for (int i = 1; i <= 9; ++i) a.push_back(i / 10.0);
  return a;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fit and evaluate rating-distribution models", args.empty() ? "acrfit" : args.front()};
  app.require_subcommand(1);
  app.set_version_flag("--version", "acrfit 1.0");

  int starts = FitOptions{}.n_starts;
  unsigned threads = 0;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--starts", starts, "Optimizer starting points per fit")->check(CLI::Range(1, 1000));
    cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
  };

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Fit one model to every stimulus");
  DataFlags fit_data;
  SeedFlags fit_seed;
  std::string fit_model, fit_out;
  fit_data.add_to(fit_cmd);
  fit_seed.add_to(fit_cmd);
  fit_cmd->add_option("--model", fit_model, "Model name")->required();
  fit_cmd->add_option("--out", fit_out, "Output .csv or .json")->required();
  add_common(fit_cmd);

  // gof
  auto* gof_cmd = app.add_subcommand("gof", "Goodness-of-fit summary per model, ranked by mean G");
  DataFlags gof_data;
  SeedFlags gof_seed;
  std::vector<std::string> gof_models;
  for (auto k : parametric_models()) gof_models.emplace_back(model_name(k));
  int gof_boot = 1000;
  std::string gof_out, gof_records;
  gof_data.add_to(gof_cmd);
  gof_seed.add_to(gof_cmd);
  gof_cmd->add_option("--models", gof_models, "Comma-separated model names")->delimiter(',');
  gof_cmd->add_option("--boot", gof_boot, "Bootstrap replicates for confidence intervals (0 = none)")
      ->check(CLI::NonNegativeNumber);
  gof_cmd->add_option("--out", gof_out, "Summary .csv or .json")->required();
  gof_cmd->add_option("--records", gof_records, "Optional per-stimulus G-test records");
  add_common(gof_cmd);

  // predict
  auto* pred_cmd = app.add_subcommand("predict", "Out-of-sample prediction error against the empirical model");
  DataFlags pred_data;
  SeedFlags pred_seed;
  std::vector<std::string> pred_models{"logit-logistic"};
  std::vector<std::string> pred_metrics{"linf"};
  int nmin = 10, nmax = 40, nstep = 1, trials = 10000;
  std::string pred_out, pred_svg, pred_raw;
  pred_data.add_to(pred_cmd);
  pred_seed.add_to(pred_cmd);
  pred_cmd->add_option("--models", pred_models, "Comma-separated model names")->delimiter(',');
  pred_cmd->add_option("--metric", pred_metrics, "Comma-separated metrics")->delimiter(',');
  pred_cmd->add_option("--nmin", nmin, "Smallest training size")->check(CLI::PositiveNumber);
  pred_cmd->add_option("--nmax", nmax, "Largest training size")->check(CLI::PositiveNumber);
  pred_cmd->add_option("--nstep", nstep, "Training size step")->check(CLI::PositiveNumber);
  pred_cmd->add_option("--trials", trials, "Trials per training size")->check(CLI::PositiveNumber);
  pred_cmd->add_option("--out", pred_out, "Table .csv or .json")->required();
  pred_cmd->add_option("--svg", pred_svg, "Optional error-vs-n chart");
  pred_cmd->add_option("--raw", pred_raw, "Optional per-trial errors");
  add_common(pred_cmd);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Sample a synthetic counts dataset from a model");
  SeedFlags sim_seed;
  std::string sim_model, sim_out;
  std::vector<double> sim_params;
  std::int64_t sim_n = 0;
  int sim_stimuli = 1, sim_categories = kDefaultCategories;
  sim_seed.add_to(sim_cmd);
  sim_cmd->add_option("--model", sim_model, "Model name")->required();
  sim_cmd->add_option("--params", sim_params, "Comma-separated parameters")->delimiter(',')->required();
  sim_cmd->add_option("--n", sim_n, "Ratings per stimulus")->required()->check(CLI::PositiveNumber);
  sim_cmd->add_option("--stimuli", sim_stimuli, "Number of stimuli")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--categories", sim_categories, "Number of rating categories")->check(CLI::Range(2, 1000));
  sim_cmd->add_option("--out", sim_out, "Counts CSV")->required();

  // gcurve
  auto* gc_cmd = app.add_subcommand("gcurve", "Empirical CDFs of per-stimulus G statistics");
  DataFlags gc_data;
  SeedFlags gc_seed;
  std::vector<std::string> gc_models;
  for (auto k : parametric_models()) gc_models.emplace_back(model_name(k));
  double gmax = 15.0;
  int gpoints = 151;
  std::string gc_out, gc_svg;
  gc_data.add_to(gc_cmd);
  gc_seed.add_to(gc_cmd);
  gc_cmd->add_option("--models", gc_models, "Comma-separated model names")->delimiter(',');
  gc_cmd->add_option("--gmax", gmax, "Largest G on the grid")->check(CLI::PositiveNumber);
  gc_cmd->add_option("--points", gpoints, "Grid points")->check(CLI::Range(2, 100000));
  gc_cmd->add_option("--out", gc_out, "Curve .csv or .json")->required();
  gc_cmd->add_option("--svg", gc_svg, "Optional chart");
  add_common(gc_cmd);

  // pca
  auto* pca_cmd = app.add_subcommand("pca", "Principal components of per-stimulus PMFs");
  DataFlags pca_data;
  SeedFlags pca_seed;
  std::string pca_model = "empirical", pca_out;
  bool standardize = false;
  pca_data.add_to(pca_cmd);
  pca_seed.add_to(pca_cmd);
  pca_cmd->add_option("--model", pca_model, "Model whose fitted PMFs are analysed");
  pca_cmd->add_flag("--standardize", standardize, "Use the correlation matrix");
  pca_cmd->add_option("--out", pca_out, "Report .csv or .json")->required();
  add_common(pca_cmd);

  // quantiles
  auto* q_cmd = app.add_subcommand("quantiles", "Latent quality quantiles of fitted quantized models");
  DataFlags q_data;
  SeedFlags q_seed;
  std::string q_model, q_out;
  std::vector<double> alphas = alpha_grid();
  q_data.add_to(q_cmd);
  q_seed.add_to(q_cmd);
  q_cmd->add_option("--model", q_model, "Quantized model name")->required();
  q_cmd->add_option("--alphas", alphas, "Comma-separated probabilities in (0,1)")->delimiter(',');
  q_cmd->add_option("--out", q_out, "Table .csv or .json")->required();
  add_common(q_cmd);

  try {
    std::vector<std::string> rest(args.rbegin(), args.rend());
    if (!rest.empty()) rest.pop_back();
    app.parse(rest);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*fit_cmd) {
      fit_seed.require_in_ci();
      const ModelKind kind = parse_model(fit_model);
      const Dataset data = fit_data.load();
      const auto fits = fit_all(data, {kind}, fit_seed.seed, starts, threads);
      std::vector<FitRecord> rows;
      for (std::size_t i = 0; i < data.stimuli.size(); ++i) {
        const FitResult& f = *fits[0][i];
        const GofRecord g = make_gof_record(data.stimuli[i].id, data.stimuli[i].counts, f);
        rows.push_back({data.stimuli[i].id, f, g.g_stat, g.p_value});
      }
      write_report(std::span<const FitRecord>(rows), fit_out, format_for(fit_out));
      say(out, std::to_string(rows.size()) + " fits", fit_out);
    } else if (*gof_cmd) {
      gof_seed.require_in_ci();
      const auto kinds = parse_models(gof_models);
      const Dataset data = gof_data.load();
      const auto fits = fit_all(data, kinds, gof_seed.seed, starts, threads);
      std::vector<GofSummary> summaries;
      std::vector<GofRecord> all_records;
      for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
        std::vector<GofRecord> records;
        for (std::size_t i = 0; i < data.stimuli.size(); ++i) {
          records.push_back(make_gof_record(data.stimuli[i].id, data.stimuli[i].counts, *fits[ki][i]));
        }
        summaries.push_back(summarize(records, gof_boot, mix_seed(gof_seed.seed, ki)));
        all_records.insert(all_records.end(), records.begin(), records.end());
      }
      std::stable_sort(summaries.begin(), summaries.end(),
                       [](const GofSummary& a, const GofSummary& b) { return a.mean_g.value < b.mean_g.value; });
      write_report(std::span<const GofSummary>(summaries), gof_out, format_for(gof_out));
      say(out, std::to_string(summaries.size()) + " model summaries", gof_out);
      if (!gof_records.empty()) {
        write_report(std::span<const GofRecord>(all_records), gof_records, format_for(gof_records));
        say(out, std::to_string(all_records.size()) + " G-test records", gof_records);
      }
    } else if (*pred_cmd) {
      pred_seed.require_in_ci();
      if (nmin > nmax) throw UsageError("--nmin must not exceed --nmax");
      TrialConfig config;
      config.kinds = parse_models(pred_models);
      config.metrics.clear();
      for (const auto& m : pred_metrics) config.metrics.push_back(parse_metric(m));
      config.sample_sizes.clear();
      for (int n = nmin; n <= nmax; n += nstep) config.sample_sizes.push_back(n);
      config.n_trials = trials;
      config.seed = pred_seed.seed;
      config.fit.n_starts = starts;
      config.threads = threads;
      config.keep_raw = !pred_raw.empty();
      const Dataset data = pred_data.load();
      const std::int64_t smallest = min_total(data);
      if (nmax >= smallest) {
        throw UsageError("--nmax " + std::to_string(nmax) + " must be below the smallest stimulus rating count (" +
                         std::to_string(smallest) + ")");
      }
      const PredictionReport report = run_trials(data, config);
      const auto rows = prediction_table(report);
      write_report(std::span<const PredictionRow>(rows), pred_out, format_for(pred_out));
      say(out, std::to_string(rows.size()) + " prediction rows", pred_out);
      if (!pred_raw.empty()) {
        write_report(std::span<const TrialRecord>(report.raw), pred_raw, format_for(pred_raw));
        say(out, std::to_string(report.raw.size()) + " trial records", pred_raw);
      }
      if (!pred_svg.empty()) {
        std::vector<Series> series;
        std::vector<ModelKind> kinds = config.kinds;
        kinds.erase(std::remove(kinds.begin(), kinds.end(), ModelKind::Empirical), kinds.end());
        kinds.push_back(ModelKind::Empirical);
        for (Metric metric : config.metrics) {
          for (ModelKind kind : kinds) {
            Series s;
            s.label = std::string(model_name(kind));
            if (config.metrics.size() > 1) s.label += " " + std::string(metric_name(metric));
            s.dashed = kind == ModelKind::Empirical;
            for (const auto& r : rows) {
              if (r.metric != metric) continue;
              if (kind == ModelKind::Empirical) {
                if (r.kind != config.kinds.front()) continue;
                s.x.push_back(r.n);
                s.y.push_back(r.empirical_error);
              } else if (r.kind == kind) {
                s.x.push_back(r.n);
                s.y.push_back(r.mean_error);
              }
            }
            series.push_back(std::move(s));
          }
        }
        write_svg(line_chart({"Prediction error", "training ratings n", "mean error"}, series), pred_svg);
        say(out, "chart", pred_svg);
      }
    } else if (*sim_cmd) {
      sim_seed.require_in_ci();
      const ModelKind kind = parse_model(sim_model);
      const Pmf pmf = pmf_of(kind, ModelParams{sim_params}, sim_categories);
      Dataset data;
      data.name = "simulated";
      data.categories = sim_categories;
      for (int i = 0; i < sim_stimuli; ++i) {
        data.stimuli.push_back({"s" + std::to_string(i + 1),
                                sample(pmf, sim_n, mix_seed(sim_seed.seed, static_cast<std::uint64_t>(i)))});
      }
      write_counts_csv(data, sim_out);
      say(out, std::to_string(sim_stimuli) + " stimuli", sim_out);
    } else if (*gc_cmd) {
      gc_seed.require_in_ci();
      const auto kinds = parse_models(gc_models);
      const Dataset data = gc_data.load();
      const int df = gof_degrees_of_freedom(data.categories, 2);
      if (df < 1) throw UsageError("G-statistic curves need at least 4 categories");
      const auto fits = fit_all(data, kinds, gc_seed.seed, starts, threads);
      GCurveTable table;
      table.kinds = kinds;
      for (int i = 0; i < gpoints; ++i) table.grid.push_back(gmax * i / (gpoints - 1));
      for (double g : table.grid) table.reference.push_back(chi2_cdf(g, df));
      for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
        std::vector<GofRecord> records;
        for (std::size_t i = 0; i < data.stimuli.size(); ++i) {
          records.push_back(make_gof_record(data.stimuli[i].id, data.stimuli[i].counts, *fits[ki][i]));
        }
        std::vector<double> fractions;
        for (const auto& p : g_cdf_curve(records, table.grid, df)) fractions.push_back(p.fraction);
        table.fractions.push_back(std::move(fractions));
      }
      write_report(table, gc_out, format_for(gc_out));
      say(out, "G-statistic curves", gc_out);
      if (!gc_svg.empty()) {
        std::vector<Series> series;
        for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
          series.push_back({std::string(model_name(kinds[ki])), table.grid, table.fractions[ki], false});
        }
        series.push_back({"chi2 reference", table.grid, table.reference, true});
        write_svg(line_chart({"CDF of G statistics", "G", "fraction of stimuli"}, series), gc_svg);
        say(out, "chart", gc_svg);
      }
    } else if (*pca_cmd) {
      pca_seed.require_in_ci();
      const ModelKind kind = parse_model(pca_model);
      const Dataset data = pca_data.load();
      const auto fits = fit_all(data, {kind}, pca_seed.seed, starts, threads);
      std::vector<Pmf> pmfs;
      for (const auto& f : fits[0]) pmfs.push_back(f->pmf);
      const PcaReport report = pca_explained(pmfs, standardize);
      write_report(report, pca_out, format_for(pca_out));
      say(out, "PCA report", pca_out);
    } else if (*q_cmd) {
      q_seed.require_in_ci();
      const ModelKind kind = parse_model(q_model);
      if (!latent_kind(kind)) {
        throw std::invalid_argument("quantiles need a quantized model (normal, logistic, logit-logistic, beta), not '" +
                                    q_model + "'");
      }
      for (double a : alphas) {
        if (!(a > 0.0 && a < 1.0)) throw UsageError("--alphas must lie strictly between 0 and 1");
      }
      const Dataset data = q_data.load();
      const auto fits = fit_all(data, {kind}, q_seed.seed, starts, threads);
      std::vector<QuantileRecord> rows;
      for (std::size_t i = 0; i < data.stimuli.size(); ++i) {
        for (const auto& row : quality_quantiles(*fits[0][i], alphas)) rows.push_back({data.stimuli[i].id, kind, row});
      }
      write_report(std::span<const QuantileRecord>(rows), q_out, format_for(q_out));
      say(out, std::to_string(rows.size()) + " quantile rows", q_out);
    }
    return kExitOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConvergenceError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace acr
