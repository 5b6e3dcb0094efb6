#include "acr/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "acr/latent.hpp"

namespace acr {

std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n) {
  if (a.size() != n * n) throw std::invalid_argument("symmetric_eigenvalues: matrix size mismatch");
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      diag += at(i, i) * at(i, i);
      for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    }
    if (off <= 1e-30 * std::max(diag, 1e-300) || off == 0.0) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i);
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

PcaReport pca_explained(std::span<const Pmf> pmfs, bool standardize) {
  if (pmfs.size() < 2) throw std::invalid_argument("pca_explained: need at least 2 PMFs");
  const std::size_t k = pmfs.front().categories();
  for (const auto& p : pmfs) {
    if (static_cast<std::size_t>(p.categories()) != k) throw DomainError("pca_explained: PMFs differ in categories");
  }
  const double m = static_cast<double>(pmfs.size());
  std::vector<double> centre(k, 0.0);
  for (const auto& p : pmfs) {
    for (std::size_t i = 0; i < k; ++i) centre[i] += p[i] / m;
  }
  std::vector<double> cov(k * k, 0.0);
  for (const auto& p : pmfs) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) cov[i * k + j] += (p[i] - centre[i]) * (p[j] - centre[j]);
    }
  }
  for (double& c : cov) c /= (m - 1.0);
  if (standardize) {
    std::vector<double> sd(k);
    for (std::size_t i = 0; i < k; ++i) sd[i] = cov[i * k + i] > 0.0 ? std::sqrt(cov[i * k + i]) : 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) cov[i * k + j] /= sd[i] * sd[j];
    }
  }

  PcaReport report;
  report.standardized = standardize;
  report.eigenvalues = symmetric_eigenvalues(cov, k);
  for (double& e : report.eigenvalues) e = std::max(e, 0.0);
  double total = 0.0;
  for (double e : report.eigenvalues) total += e;
  report.explained_variance_cumulative.resize(k);
  if (!(total > 1e-300)) {
    report.degenerate = true;
    std::fill(report.explained_variance_cumulative.begin(), report.explained_variance_cumulative.end(), 1.0);
    return report;
  }
  double partial = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    partial += report.eigenvalues[i];
    report.explained_variance_cumulative[i] = std::min(partial / total, 1.0);
  }
  report.explained_variance_cumulative.back() = 1.0;
  return report;
}

std::vector<QuantileRow> quality_quantiles(const FitResult& fit, std::span<const double> alphas) {
  const auto lk = latent_kind(fit.kind);
  if (!lk) {
    throw std::invalid_argument("quantiles need a quantized latent model, not '" + std::string(model_name(fit.kind)) +
                                "'");
  }
  const int k = fit.pmf.categories();
  const LatentParams params{fit.theta.theta.at(0), fit.theta.theta.at(1)};
  std::vector<QuantileRow> rows;
  rows.reserve(alphas.size());
  for (double alpha : alphas) {
    QuantileRow row;
    row.alpha = alpha;
    row.latent = latent_quantile(*lk, params, alpha);
    row.rescaled = support_of(*lk) == Support::UnitInterval ? 1.0 + (k - 1) * row.latent : row.latent;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace acr
