#include "acr/pmf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace acr {

namespace {

constexpr double kSumTolerance = 1e-12;

void require_same_size(const Pmf& p, const Pmf& q) {
  if (p.categories() != q.categories()) {
    throw DomainError("PMFs have different numbers of categories");
  }
}

}  // namespace

RatingCounts::RatingCounts(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {
  if (counts_.size() < 2) throw DomainError("rating counts need at least 2 categories");
  for (auto c : counts_) {
    if (c < 0) throw DomainError("rating counts must be non-negative");
    total_ += c;
  }
}

Pmf::Pmf(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) throw DomainError("a PMF needs at least 2 categories");
  double sum = 0.0;
  for (double x : probs_) {
    if (!(x >= 0.0)) throw DomainError("PMF entries must be non-negative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    std::ostringstream msg;
    msg << "PMF entries sum to " << sum << ", not 1";
    throw DomainError(msg.str());
  }
}

Pmf Pmf::from_weights(std::vector<double> weights) {
  if (weights.size() < 2) throw DomainError("a PMF needs at least 2 categories");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("PMF weights must be finite and non-negative");
    sum += w;
  }
  if (!(sum > 0.0)) throw DomainError("PMF weights sum to zero");
  for (double& w : weights) w /= sum;
  return Pmf(Unchecked{}, std::move(weights));
}

Pmf Pmf::uniform(int categories) {
  if (categories < 2) throw DomainError("a PMF needs at least 2 categories");
  return Pmf(Unchecked{}, std::vector<double>(categories, 1.0 / categories));
}

Pmf Pmf::point_mass(int categories, int category) {
  if (categories < 2) throw DomainError("a PMF needs at least 2 categories");
  if (category < 1 || category > categories) throw DomainError("point mass category out of range");
  std::vector<double> probs(categories, 0.0);
  probs[category - 1] = 1.0;
  return Pmf(Unchecked{}, std::move(probs));
}

std::vector<double> Pmf::cdf() const {
  std::vector<double> out(probs_.size());
  std::partial_sum(probs_.begin(), probs_.end(), out.begin());
  out.back() = 1.0;
  return out;
}

double mean(const Pmf& p) {
  double m = 0.0;
  for (int i = 0; i < p.categories(); ++i) m += (i + 1) * p[i];
  return m;
}

double variance(const Pmf& p) {
  const double psi = mean(p);
  double v = 0.0;
  for (int i = 0; i < p.categories(); ++i) {
    const double d = (i + 1) - psi;
    v += d * d * p[i];
  }
  return v;
}

VarianceBounds variance_bounds(double psi, int categories) {
  if (categories < 2) throw DomainError("need at least 2 categories");
  const double top = static_cast<double>(categories);
  if (!(psi >= 1.0 - 1e-12 && psi <= top + 1e-12)) {
    std::ostringstream msg;
    msg << "mean " << psi << " outside [1, " << categories << "]";
    throw DomainError(msg.str());
  }
  psi = std::clamp(psi, 1.0, top);
  VarianceBounds b;
  b.v_min = (std::ceil(psi) - psi) * (psi - std::floor(psi));
  b.v_max = (psi - 1.0) * (top - psi);
  return b;
}

Moments moments(const Pmf& p) {
  Moments m;
  m.psi = mean(p);
  m.v = variance(p);
  const auto b = variance_bounds(m.psi, p.categories());
  m.v_min = b.v_min;
  m.v_max = b.v_max;
  const double span = b.v_max - b.v_min;
  if (span > 1e-13) m.rho = std::clamp((b.v_max - m.v) / span, 0.0, 1.0);
  return m;
}

double variance_from_rho(double psi, double rho, int categories) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("rho must lie in [0, 1]");
  const auto b = variance_bounds(psi, categories);
  return b.v_max - rho * (b.v_max - b.v_min);
}

double entropy(const Pmf& p) {
  double h = 0.0;
  for (double x : p.probs()) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

double cross_entropy(const Pmf& p, const Pmf& q) {
  require_same_size(p, q);
  double h = 0.0;
  for (int i = 0; i < p.categories(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    h -= p[i] * std::log(q[i]);
  }
  return h;
}

double kl_divergence(const Pmf& p, const Pmf& q) {
  require_same_size(p, q);
  double d = 0.0;
  for (int i = 0; i < p.categories(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    d += p[i] * std::log(p[i] / q[i]);
  }
  return std::max(d, 0.0);
}

namespace {

constexpr std::array<std::string_view, 5> kMetricNames = {"linf", "euclidean", "bhattacharyya", "ks",
                                                          "wasserstein"};
constexpr std::array<Metric, 5> kMetrics = {Metric::Linf, Metric::Euclidean, Metric::Bhattacharyya,
                                            Metric::KolmogorovSmirnov, Metric::Wasserstein};

}  // namespace

std::string_view metric_name(Metric metric) { return kMetricNames[static_cast<int>(metric)]; }

Metric parse_metric(std::string_view name) {
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
    if (kMetricNames[i] == name) return kMetrics[i];
  }
  std::string msg = "unknown metric '" + std::string(name) + "'; valid metrics:";
  for (auto n : kMetricNames) msg += " " + std::string(n);
  throw std::invalid_argument(msg);
}

std::span<const Metric> all_metrics() { return kMetrics; }

double distance(const Pmf& p, const Pmf& q, Metric metric) {
  require_same_size(p, q);
  const int k = p.categories();
  switch (metric) {
    case Metric::Linf: {
      double d = 0.0;
      for (int i = 0; i < k; ++i) d = std::max(d, std::abs(p[i] - q[i]));
      return d;
    }
    case Metric::Euclidean: {
      double s = 0.0;
      for (int i = 0; i < k; ++i) s += (p[i] - q[i]) * (p[i] - q[i]);
      return std::sqrt(s);
    }
    case Metric::Bhattacharyya: {
      double bc = 0.0;
      for (int i = 0; i < k; ++i) bc += std::sqrt(p[i] * q[i]);
      if (bc <= 0.0) return std::numeric_limits<double>::infinity();
      return std::max(0.0, -std::log(std::min(bc, 1.0)));
    }
    case Metric::KolmogorovSmirnov:
    case Metric::Wasserstein: {
      double cp = 0.0, cq = 0.0, sup = 0.0, area = 0.0;
      for (int i = 0; i + 1 < k; ++i) {
        cp += p[i];
        cq += q[i];
        const double gap = std::abs(cp - cq);
        sup = std::max(sup, gap);
        area += gap;
      }
      return metric == Metric::Wasserstein ? area : sup;
    }
  }
  throw std::logic_error("unhandled metric");
}

Pmf normalize(const RatingCounts& counts) {
  if (counts.total() < 1) throw DomainError("cannot normalize rating counts with total 0");
  std::vector<double> probs(counts.categories());
  const double n = static_cast<double>(counts.total());
  for (int i = 0; i < counts.categories(); ++i) probs[i] = counts[i] / n;
  return Pmf(std::move(probs));
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw DomainError("uniform_index bound must be positive");
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RatingCounts sample(const Pmf& p, std::int64_t n, Rng& rng) {
  if (n < 1) throw DomainError("sample size must be at least 1");
  const int k = p.categories();
  const auto cdf = p.cdf();
  int last_positive = k - 1;
  while (last_positive > 0 && p[last_positive] == 0.0) --last_positive;
  std::vector<std::int64_t> counts(k, 0);
  for (std::int64_t draw = 0; draw < n; ++draw) {
    const double u = uniform01(rng);
    int cat = last_positive;
    for (int i = 0; i < last_positive; ++i) {
      if (u < cdf[i]) {
        cat = i;
        break;
      }
    }
    ++counts[cat];
  }
  return RatingCounts(std::move(counts));
}

RatingCounts sample(const Pmf& p, std::int64_t n, std::uint64_t seed) {
  Rng rng(seed);
  return sample(p, n, rng);
}

}  // namespace acr
