#pragma once

// Independent reference implementations used only by the tests. They share
// no code with the library and favour obviousness over speed.

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace oracle {

// Maclaurin series of erf, summed in long double. Accurate to ~1e-15 for |x| <= 4.
inline double erf_series(double x) {
  long double term = x, sum = x;
  const long double x2 = static_cast<long double>(x) * x;
  for (int n = 1; n < 200; ++n) {
    term *= -x2 / n;
    const long double add = term / (2 * n + 1);
    sum += add;
    if (std::fabs(add) < 1e-22L) break;
  }
  return static_cast<double>(2.0L / std::sqrt(std::numbers::pi_v<long double>) * sum);
}

inline double phi(double x) { return 0.5 * (1.0 + erf_series(x / std::numbers::sqrt2)); }

inline double mean(const std::vector<double>& p) {
  double m = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) m += (k + 1.0) * p[k];
  return m;
}

inline double variance(const std::vector<double>& p) {
  const double m = mean(p);
  double v = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) v += (k + 1.0 - m) * (k + 1.0 - m) * p[k];
  return v;
}

inline double entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

// Variance extremes at fixed mean. The feasible set is a polytope whose
// vertices are two-point PMFs (or point masses), and variance is linear in p
// once the mean is fixed, so enumerating the vertices is exact.
inline std::pair<double, double> variance_bounds_by_vertices(double psi, int k) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 1; i <= k; ++i) {
    for (int j = i; j <= k; ++j) {
      if (psi < i - 1e-15 || psi > j + 1e-15) continue;
      double v;
      if (i == j) {
        if (std::abs(psi - i) > 1e-15) continue;
        v = 0.0;
      } else {
        const double w = (j - psi) / (j - i);  // weight on i
        v = w * (i - psi) * (i - psi) + (1 - w) * (j - psi) * (j - psi);
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return {lo, hi};
}

// K = 5 PMF with given free coordinates p2, p4 and moments (psi, v): p1, p3, p5
// solve the Vandermonde system on {1, 3, 5}. Returns false if infeasible.
inline bool complete_k5(double p2, double p4, double psi, double v, std::vector<double>& p) {
  const double m0 = 1.0 - p2 - p4;
  const double m1 = psi - 2 * p2 - 4 * p4;
  const double m2 = v + psi * psi - 4 * p2 - 16 * p4;
  // a + b + c = m0, a + 3b + 5c = m1, a + 9b + 25c = m2
  const double c = (m2 - 4 * m1 + 3 * m0) / 8.0;
  const double b = (m1 - m0 - 4 * c) / 2.0;
  const double a = m0 - b - c;
  p = {a, p2, b, p4, c};
  for (double x : p) {
    if (x < -1e-15) return false;
  }
  for (double& x : p) x = std::max(x, 0.0);
  return true;
}

// Entropy maximizer on K = 5 with mean psi and variance v by exhaustive grid
// search over (p2, p4), refined around the incumbent `zooms` times.
inline std::vector<double> maxent_grid_k5(double psi, double v, int grid = 200, int zooms = 6) {
  std::vector<double> best, p;
  double best_h = -1.0;
  // The mean alone bounds each probability: p_k (k-1) <= psi-1 and p_k (5-k) <= 5-psi.
  double lo2 = 0.0, hi2 = std::min({1.0, psi - 1.0, (5.0 - psi) / 3.0});
  double lo4 = 0.0, hi4 = std::min({1.0, (psi - 1.0) / 3.0, 5.0 - psi});
  int steps = grid;
  for (int z = 0; z <= zooms; ++z) {
    double b2 = 0.0, b4 = 0.0;
    bool found = false;
    for (int i = 0; i <= steps; ++i) {
      for (int j = 0; j <= steps; ++j) {
        const double p2 = lo2 + (hi2 - lo2) * i / steps;
        const double p4 = lo4 + (hi4 - lo4) * j / steps;
        if (!complete_k5(p2, p4, psi, v, p)) continue;
        const double h = entropy(p);
        if (h > best_h) {
          best_h = h;
          best = p;
          b2 = p2;
          b4 = p4;
          found = true;
        }
      }
    }
    if (!found && z == 0 && steps < 16 * grid) {
      // Thin feasible slice: densify the first pass.
      steps *= 2;
      --z;
      continue;
    }
    if (!found) break;
    const double w2 = 4.0 * (hi2 - lo2) / steps, w4 = 4.0 * (hi4 - lo4) / steps;
    lo2 = std::max(0.0, b2 - w2);
    hi2 = std::min(1.0, b2 + w2);
    lo4 = std::max(0.0, b4 - w4);
    hi4 = std::min(1.0, b4 + w4);
    steps = grid;
  }
  return best;
}

// Earth mover's distance with ground cost |i - j| by successive shortest
// augmenting paths on the bipartite transport network.
inline double transport_cost(const std::vector<double>& p, const std::vector<double>& q) {
  const int k = static_cast<int>(p.size());
  const int n = 2 * k + 2, src = 2 * k, dst = 2 * k + 1;
  struct Edge {
    int to;
    double cap, cost;
    int rev;
  };
  std::vector<std::vector<Edge>> g(n);
  auto add = [&](int a, int b, double cap, double cost) {
    g[a].push_back({b, cap, cost, static_cast<int>(g[b].size())});
    g[b].push_back({a, 0.0, -cost, static_cast<int>(g[a].size()) - 1});
  };
  for (int i = 0; i < k; ++i) add(src, i, p[i], 0.0);
  for (int j = 0; j < k; ++j) add(k + j, dst, q[j], 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) add(i, k + j, 2.0, std::abs(i - j));
  }
  double total = 0.0, moved = 0.0;
  while (moved < 1.0 - 1e-13) {
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> prev_node(n, -1), prev_edge(n, -1);
    dist[src] = 0.0;
    for (int round = 0; round < n; ++round) {
      bool changed = false;
      for (int a = 0; a < n; ++a) {
        if (!std::isfinite(dist[a])) continue;
        for (int e = 0; e < static_cast<int>(g[a].size()); ++e) {
          const Edge& ed = g[a][e];
          if (ed.cap > 1e-15 && dist[a] + ed.cost < dist[ed.to] - 1e-15) {
            dist[ed.to] = dist[a] + ed.cost;
            prev_node[ed.to] = a;
            prev_edge[ed.to] = e;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (!std::isfinite(dist[dst])) break;
    double push = std::numeric_limits<double>::infinity();
    for (int v = dst; v != src; v = prev_node[v]) push = std::min(push, g[prev_node[v]][prev_edge[v]].cap);
    for (int v = dst; v != src; v = prev_node[v]) {
      Edge& ed = g[prev_node[v]][prev_edge[v]];
      ed.cap -= push;
      g[v][ed.rev].cap += push;
    }
    total += push * dist[dst];
    moved += push;
  }
  return total;
}

// Uniform random point on the simplex (normalized exponentials).
inline std::vector<double> random_simplex(std::mt19937_64& rng, int k) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(k);
  double s = 0.0;
  for (double& x : p) s += (x = e(rng));
  for (double& x : p) x /= s;
  return p;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("acr_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace oracle
