#include <cmath>
#include <random>

#include "acr/latent.hpp"
#include "acr/special.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace acr;
using doctest::Approx;

namespace {

constexpr LatentKind kAll[] = {LatentKind::Normal, LatentKind::Logistic, LatentKind::LogitLogistic, LatentKind::Beta};

LatentParams random_params(LatentKind kind, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (kind) {
    case LatentKind::Normal:
    case LatentKind::Logistic:
      return {1.0 + 4.0 * u(rng), 0.1 + 2.0 * u(rng)};
    case LatentKind::LogitLogistic:
      return {-3.0 + 6.0 * u(rng), 0.1 + 2.0 * u(rng)};
    case LatentKind::Beta:
      return {0.3 + 20.0 * u(rng), 0.3 + 20.0 * u(rng)};
  }
  return {};
}

}  // namespace

TEST_CASE("cdf values") {
  CHECK(latent_cdf(LatentKind::Normal, {0, 1}, 0.0) == 0.5);
  CHECK(latent_cdf(LatentKind::Logistic, {0, 1}, 0.0) == 0.5);
  CHECK(latent_cdf(LatentKind::Beta, {1, 1}, 0.3) == Approx(0.3).epsilon(1e-14));
  CHECK(latent_cdf(LatentKind::Normal, {0, 1}, 1.5) == Approx(0.93319).epsilon(1e-5));
  CHECK(latent_cdf(LatentKind::LogitLogistic, {0, 1}, 0.5) == Approx(0.5));
  for (double x = -6.0; x <= 6.0; x += 0.25) {
    CHECK(special::normal_cdf(x) == Approx(oracle::phi(x)).epsilon(1e-13));
    CHECK(special::normal_sf(x) == Approx(special::normal_cdf(-x)).epsilon(1e-14));
    if (x <= 2.0) CHECK(special::normal_sf(x) == Approx(1.0 - oracle::phi(x)).epsilon(1e-12));
    CHECK(std::erf(-x) == -std::erf(x));
  }
  CHECK_THROWS_AS(latent_cdf(LatentKind::Normal, {0, 0}, 0.0), DomainError);
  CHECK_THROWS_AS(latent_cdf(LatentKind::Beta, {-1, 1}, 0.5), DomainError);
}

TEST_CASE("special functions") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 2000; ++t) {
    const double a = 0.05 + 50.0 * u(rng), b = 0.05 + 50.0 * u(rng), x = u(rng);
    CHECK(special::inc_beta(a, b, x) == Approx(1.0 - special::inc_beta(b, a, 1.0 - x)).epsilon(1e-12).scale(1.0));
  }
  // I_x(1, b) = 1 - (1 - x)^b and I_x(a, 1) = x^a.
  CHECK(special::inc_beta(1.0, 3.0, 0.2) == Approx(1.0 - std::pow(0.8, 3.0)).epsilon(1e-14));
  CHECK(special::inc_beta(2.5, 1.0, 0.7) == Approx(std::pow(0.7, 2.5)).epsilon(1e-14));
  // Q(1, x) = e^-x; P(1/2, x) = erf(sqrt x).
  for (double x : {0.01, 0.5, 1.0, 3.0, 10.0, 40.0}) {
    CHECK(special::gamma_q(1.0, x) == Approx(std::exp(-x)).epsilon(1e-13));
    if (x <= 10.0) CHECK(special::gamma_p(0.5, x) == Approx(oracle::erf_series(std::sqrt(x))).epsilon(1e-12));
  }
}

TEST_CASE("thresholds") {
  const auto n = default_thresholds(LatentKind::Normal, 5);
  CHECK(std::vector<double>(n.taus().begin(), n.taus().end()) == std::vector<double>{1.5, 2.5, 3.5, 4.5});
  const auto b = default_thresholds(LatentKind::Beta, 5);
  CHECK(std::vector<double>(b.taus().begin(), b.taus().end()) == std::vector<double>{0.2, 0.4, 0.6, 0.8});
  const auto l = default_thresholds(LatentKind::LogitLogistic, 4);
  CHECK(std::vector<double>(l.taus().begin(), l.taus().end()) == std::vector<double>{0.25, 0.5, 0.75});
  CHECK_THROWS_AS(Thresholds(Support::UnitInterval, {0.2, 1.0}), DomainError);
  CHECK_THROWS_AS(Thresholds(Support::RealLine, {2.0, 1.0}), DomainError);
}

TEST_CASE("quantize") {
  const auto taus = default_thresholds(LatentKind::Normal, 5);
  const Pmf sharp = quantize(LatentKind::Normal, {3.0, 1e-9}, taus);
  CHECK(sharp[2] == Approx(1.0).epsilon(1e-12));
  CHECK(sharp[0] < 1e-12);

  const Pmf p = quantize(LatentKind::Normal, {3.0, 1.0}, taus);
  const double edge = oracle::phi(-1.5), inner = oracle::phi(-0.5) - oracle::phi(-1.5),
               mid = oracle::phi(0.5) - oracle::phi(-0.5);
  CHECK(p[0] == Approx(edge).epsilon(1e-12));
  CHECK(p[1] == Approx(inner).epsilon(1e-12));
  CHECK(p[2] == Approx(mid).epsilon(1e-12));
  CHECK(p[3] == Approx(inner).epsilon(1e-12));
  CHECK(p[4] == Approx(edge).epsilon(1e-12));
  CHECK(std::abs(p[0] - 0.0668) < 1e-4);
  CHECK(std::abs(p[1] - 0.2417) < 1e-4);
  CHECK(std::abs(p[2] - 0.3829) < 1e-4);

  const Pmf u = quantize(LatentKind::Beta, {1.0, 1.0}, default_thresholds(LatentKind::Beta, 5));
  for (int k = 0; k < 5; ++k) CHECK(u[k] == Approx(0.2).epsilon(1e-13));

  std::mt19937_64 rng(5);
  for (LatentKind kind : kAll) {
    const auto t = default_thresholds(kind, 5);
    for (int i = 0; i < 10000; ++i) {
      const Pmf q = quantize(kind, random_params(kind, rng), t);
      double s = 0.0;
      for (double x : q.probs()) s += x;
      REQUIRE(std::abs(s - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("cdf is monotone and consistent with the density") {
  std::mt19937_64 rng(8);
  for (LatentKind kind : kAll) {
    for (int i = 0; i < 50; ++i) {
      const auto params = random_params(kind, rng);
      const bool unit = support_of(kind) == Support::UnitInterval;
      double prev = 0.0;
      for (int j = 1; j < 200; ++j) {
        const double x = unit ? j / 200.0 : -2.0 + 10.0 * j / 200.0;
        const double f = latent_cdf(kind, params, x);
        CHECK(f >= prev);
        prev = f;
        CHECK(latent_sf(kind, params, x) == Approx(1.0 - f).epsilon(1e-10).scale(1.0));
        // Central difference vs. analytic density, away from the tails.
        const double h = 1e-5 * (unit ? std::min(x, 1.0 - x) : 1.0);
        const double pdf = latent_pdf(kind, params, x);
        if (pdf < 1e-3 || (unit && (x < 0.02 || x > 0.98))) continue;
        const double num = (latent_cdf(kind, params, x + h) - latent_cdf(kind, params, x - h)) / (2 * h);
        CHECK(num == Approx(pdf).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("quantiles") {
  CHECK(latent_quantile(LatentKind::Normal, {3, 1}, 0.5) == Approx(3.0).epsilon(1e-12));
  CHECK(latent_quantile(LatentKind::Logistic, {0, 1}, 0.75) == Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(latent_quantile(LatentKind::Beta, {1, 1}, 0.42) == Approx(0.42).epsilon(1e-10));
  CHECK_THROWS_AS(latent_quantile(LatentKind::Normal, {3, 1}, 0.0), DomainError);
  CHECK_THROWS_AS(latent_quantile(LatentKind::Normal, {3, 1}, 1.0), DomainError);

  std::mt19937_64 rng(9);
  for (LatentKind kind : kAll) {
    for (int i = 0; i < 100; ++i) {
      const auto params = random_params(kind, rng);
      double prev = -1e300;
      for (int j = 1; j < 100; ++j) {
        const double alpha = j / 100.0;
        const double x = latent_quantile(kind, params, alpha);
        CHECK(std::abs(latent_cdf(kind, params, x) - alpha) < 1e-9);
        CHECK(x >= prev);
        prev = x;
      }
    }
  }
}
