#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace acr {

inline constexpr int kDefaultCategories = 5;

// Raised for arguments outside a function's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Observed number of ratings per category. Category k (1-based on the rating
// scale) lives at index k-1.
class RatingCounts {
 public:
  RatingCounts() = default;
  explicit RatingCounts(std::vector<std::int64_t> counts);

  int categories() const { return static_cast<int>(counts_.size()); }
  std::int64_t total() const { return total_; }
  std::int64_t operator[](int index) const { return counts_[index]; }
  std::span<const std::int64_t> values() const { return counts_; }

  bool operator==(const RatingCounts&) const = default;

 private:
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 0;
};

// A probability mass function over the categories 1..K.
class Pmf {
 public:
  // Validates: K >= 2, entries non-negative, sum within 1e-12 of one.
  explicit Pmf(std::vector<double> probs);

  // Rescales non-negative weights to unit sum. Used for computed results
  // whose sum is off by rounding only.
  static Pmf from_weights(std::vector<double> weights);
  static Pmf uniform(int categories);
  // category is on the rating scale, 1..K.
  static Pmf point_mass(int categories, int category);

  int categories() const { return static_cast<int>(probs_.size()); }
  double operator[](int index) const { return probs_[index]; }
  std::span<const double> probs() const { return probs_; }

  // Cumulative sums, last entry is 1.
  std::vector<double> cdf() const;

  bool operator==(const Pmf&) const = default;

 private:
  struct Unchecked {};
  Pmf(Unchecked, std::vector<double> probs) : probs_(std::move(probs)) {}

  std::vector<double> probs_;
};

struct VarianceBounds {
  double v_min = 0.0;
  double v_max = 0.0;
};

struct Moments {
  double psi = 0.0;
  double v = 0.0;
  double v_min = 0.0;
  double v_max = 0.0;
  // Empty when v_max == v_min (psi at 1 or K): rho is undefined there.
  std::optional<double> rho;
};

double mean(const Pmf& p);
double variance(const Pmf& p);

// Range of variances attainable by a PMF on 1..K with mean psi.
VarianceBounds variance_bounds(double psi, int categories = kDefaultCategories);

Moments moments(const Pmf& p);

// Variance corresponding to a complementary normalized variance rho.
double variance_from_rho(double psi, double rho, int categories = kDefaultCategories);

// Shannon entropy in nats, 0 ln 0 = 0.
double entropy(const Pmf& p);

// -sum p_k ln q_k. Terms with p_k = 0 contribute nothing; p_k > 0 with
// q_k = 0 yields +infinity.
double cross_entropy(const Pmf& p, const Pmf& q);

// Kullback-Leibler divergence D(p || q) in nats.
double kl_divergence(const Pmf& p, const Pmf& q);

enum class Metric { Linf, Euclidean, Bhattacharyya, KolmogorovSmirnov, Wasserstein };

std::string_view metric_name(Metric metric);
Metric parse_metric(std::string_view name);
std::span<const Metric> all_metrics();

// Bhattacharyya is the distance -ln sum sqrt(p_k q_k); disjoint supports give
// +infinity. Wasserstein uses unit spacing between adjacent categories.
double distance(const Pmf& p, const Pmf& q, Metric metric);

// The empirical model: relative frequencies. Throws DomainError when total is 0.
Pmf normalize(const RatingCounts& counts);

// Random numbers. The engine is std::mt19937_64 (fully specified by the C++
// standard); the conversions below are fixed here instead of relying on the
// implementation-defined std distributions, so sampled data is identical
// across standard libraries.
using Rng = std::mt19937_64;

// 53-bit uniform double in [0, 1).
double uniform01(Rng& rng);
// Uniform integer in [0, bound), bound >= 1, by rejection.
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound);
// SplitMix64 finalizer, used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// n i.i.d. categorical draws from p by inverse-CDF lookup.
RatingCounts sample(const Pmf& p, std::int64_t n, Rng& rng);
RatingCounts sample(const Pmf& p, std::int64_t n, std::uint64_t seed);

}  // namespace acr
