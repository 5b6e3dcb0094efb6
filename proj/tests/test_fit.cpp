#include <cmath>
#include <random>

#include "acr/fit.hpp"
#include "acr/maxent.hpp"
#include "acr/optimize.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace acr;
using doctest::Approx;

TEST_CASE("maxent reference cases") {
  auto s = maxent_pmf(3.0, 0.5, 5);
  CHECK(s.boundary_case == MaxEntBoundary::Interior);
  for (int k = 0; k < 5; ++k) CHECK(s.pmf[k] == Approx(0.2).epsilon(1e-12));
  CHECK(std::abs(s.lambda1) < 1e-10);
  CHECK(std::abs(s.lambda2) < 1e-10);

  s = maxent_pmf(3.0, 1.0, 5);
  CHECK(s.pmf == Pmf::point_mass(5, 3));

  s = maxent_pmf(2.0, 0.0, 5);
  CHECK(s.boundary_case == MaxEntBoundary::MaxVariance);
  CHECK(s.pmf[0] == Approx(0.75).epsilon(1e-14));
  CHECK(s.pmf[4] == Approx(0.25).epsilon(1e-14));

  s = maxent_pmf(2.4, 1.0, 5);
  CHECK(s.boundary_case == MaxEntBoundary::MinVariance);
  CHECK(s.pmf[1] == Approx(0.6).epsilon(1e-14));
  CHECK(s.pmf[2] == Approx(0.4).epsilon(1e-14));

  CHECK(maxent_pmf(1.0, 0.3, 5).boundary_case == MaxEntBoundary::PointMass);
  CHECK(maxent_pmf(5.0, 0.3, 5).pmf == Pmf::point_mass(5, 5));
  CHECK_THROWS_AS(maxent_pmf(0.5, 0.3, 5), DomainError);
  CHECK_THROWS_AS(maxent_pmf(3.0, 1.3, 5), DomainError);
}

TEST_CASE("maxent uniform case against an exhaustive discretization") {
  // 1000 x 1000 grid over the free coordinates of the constraint set.
  std::vector<double> p, best;
  double best_h = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    for (int j = 0; j <= 1000; ++j) {
      if (!oracle::complete_k5(i / 1000.0, j / 1000.0, 3.0, 2.0, p)) continue;
      const double h = oracle::entropy(p);
      if (h > best_h) best_h = h, best = p;
    }
  }
  const auto s = maxent_pmf(3.0, 0.5, 5);
  for (int k = 0; k < 5; ++k) CHECK(std::abs(s.pmf[k] - best[k]) < 1e-3);
}

TEST_CASE("maxent interior solutions have exponential-family form and tiny residuals") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 500; ++t) {
    const double psi = 1.01 + 3.98 * u(rng), rho = 0.005 + 0.99 * u(rng);
    const auto s = maxent_pmf(psi, rho, 5);
    REQUIRE(s.boundary_case == MaxEntBoundary::Interior);
    CHECK(s.residual < 1e-10);
    const auto m = moments(s.pmf);
    CHECK(std::abs(m.psi - psi) < 1e-10);
    CHECK(std::abs(m.v - variance_from_rho(psi, rho, 5)) < 1e-10);
    // log p_k - lambda1 k - lambda2 k^2 is constant.
    const double c0 = std::log(s.pmf[0]) - s.lambda1 - s.lambda2;
    for (int k = 2; k <= 5; ++k) {
      const double ck = std::log(s.pmf[k - 1]) - s.lambda1 * k - s.lambda2 * k * k;
      CHECK(ck == Approx(c0).epsilon(1e-8).scale(1.0));
    }
    // Uniqueness: a distant start reaches the same PMF.
    MaxEntOptions other;
    other.lambda1_init = 2.0;
    other.lambda2_init = -0.7;
    const auto s2 = maxent_pmf(psi, rho, 5, other);
    CHECK(distance(s.pmf, s2.pmf, Metric::Linf) < 1e-9);
  }
}

TEST_CASE("maxent dominates every feasible PMF with the same moments") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int compared = 0;
  for (int t = 0; t < 1000; ++t) {
    const double psi = 1.2 + 3.6 * u(rng), rho = 0.05 + 0.9 * u(rng);
    const double v = variance_from_rho(psi, rho, 5);
    const double h = entropy(maxent_pmf(psi, rho, 5).pmf);
    std::vector<double> q;
    int found = 0;
    for (int tries = 0; found < 1000 && tries < 200000; ++tries) {
      if (!oracle::complete_k5(u(rng), u(rng), psi, v, q)) continue;
      ++found;
      REQUIRE(oracle::entropy(q) <= h + 1e-9);
    }
    compared += found;
  }
  CHECK(compared > 100000);
}

TEST_CASE("Nelder-Mead on a bounded problem") {
  const Objective rosen = [](std::span<const double> x) {
    return 100.0 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]) + (1 - x[0]) * (1 - x[0]);
  };
  const std::vector<double> lo{-2, -2}, hi{2, 2};
  NelderMeadOptions o;
  o.max_iter = 5000;
  const auto r = nelder_mead(rosen, {-1.2, 1.0}, lo, hi, o);
  CHECK(r.converged);
  CHECK(r.x[0] == Approx(1.0).epsilon(1e-3));
  CHECK(r.x[1] == Approx(1.0).epsilon(1e-3));
  // Minimum outside the box lands on the boundary.
  const Objective shifted = [](std::span<const double> x) { return (x[0] - 5) * (x[0] - 5) + x[1] * x[1]; };
  const auto b = nelder_mead(shifted, {0.0, 0.5}, lo, hi, o);
  CHECK(b.x[0] == Approx(2.0).epsilon(1e-6));
}

TEST_CASE("MLE reference cases") {
  SUBCASE("self-recovery from exact expected counts") {
    const Pmf p = pmf_of(ModelKind::QuantizedNormal, {{3.0, 1.0}});
    std::vector<std::int64_t> c;
    for (double x : p.probs()) c.push_back(std::llround(1e6 * x));
    const auto f = mle_fit(ModelKind::QuantizedNormal, RatingCounts(c));
    CHECK(f.converged);
    CHECK(std::abs(f.theta.theta[0] - 3.0) < 1e-3);
    CHECK(std::abs(f.theta.theta[1] - 1.0) < 1e-3);
  }
  SUBCASE("degenerate data") {
    const auto f = mle_fit(ModelKind::MaxEntropy, RatingCounts({0, 0, 40, 0, 0}));
    CHECK(f.pmf[2] == Approx(1.0).epsilon(1e-6));
    CHECK(*moments(f.pmf).rho == Approx(1.0).epsilon(1e-6));
    CHECK(f.theta.theta[1] == Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("uniform data") {
    const auto f = mle_fit(ModelKind::MaxEntropy, RatingCounts({8, 8, 8, 8, 8}));
    for (int k = 0; k < 5; ++k) CHECK(f.pmf[k] == Approx(0.2).epsilon(1e-6));
    CHECK(f.neg_log_likelihood == Approx(40.0 * std::log(5.0)).epsilon(1e-9));
  }
  SUBCASE("empirical is not fitted by MLE") {
    CHECK_THROWS_AS(mle_fit(ModelKind::Empirical, RatingCounts({1, 2, 3, 4, 5})), std::invalid_argument);
    const auto e = fit(ModelKind::Empirical, RatingCounts({1, 2, 3, 4, 0}));
    CHECK(e.pmf == normalize(RatingCounts({1, 2, 3, 4, 0})));
    CHECK(e.neg_log_likelihood == Approx(-(1 * std::log(0.1) + 2 * std::log(0.2) + 3 * std::log(0.3) + 4 * std::log(0.4))));
  }
  SUBCASE("maxent MLE is the moment match") {
    // Exponential family in (k, k^2): the likelihood equations are the moment equations.
    const RatingCounts c({5, 15, 40, 30, 10});
    const auto f = mle_fit(ModelKind::MaxEntropy, c);
    const auto m = moments(normalize(c));
    CHECK(f.theta.theta[0] == Approx(m.psi).epsilon(1e-4));
    CHECK(f.theta.theta[1] == Approx(*m.rho).epsilon(1e-4));
  }
}

TEST_CASE("fits are locally optimal, deterministic and bounded below by the entropy") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> d(0, 30);
  for (int t = 0; t < 100; ++t) {
    std::vector<std::int64_t> c(5);
    for (auto& x : c) x = d(rng);
    c[static_cast<std::size_t>(t % 5)] += 1;
    const RatingCounts counts(c);
    const Pmf emp = normalize(counts);
    for (ModelKind kind : parametric_models()) {
      FitOptions o;
      o.seed = static_cast<std::uint64_t>(t);
      const auto f = mle_fit(kind, counts, o);
      CHECK(f.neg_log_likelihood >= counts.total() * entropy(emp) - 1e-9);
      const double best = floored_cross_entropy(emp, f.pmf);
      const auto bounds = param_bounds(kind);
      for (std::size_t i = 0; i < 2; ++i) {
        for (double step : {-1e-3, 1e-3}) {
          auto theta = f.theta;
          theta.theta[i] += step;
          if (theta.theta[i] < bounds[i].low || theta.theta[i] > bounds[i].high) continue;
          CHECK(floored_cross_entropy(emp, pmf_of(kind, theta)) >= best - 1e-9);
        }
      }
      if (t < 10) {
        const auto again = mle_fit(kind, counts, o);
        CHECK(again.theta == f.theta);
      }
    }
  }
}
