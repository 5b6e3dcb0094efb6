#include "acr/maxent.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace acr {

namespace {

constexpr double kAcceptResidual = 1e-10;
// Closer than this to rho = 0 or 1 the interior solution is indistinguishable
// from the boundary distribution in double precision.
constexpr double kBoundarySnap = 1e-14;

// Centered features f1 = k - psi and f2 = (k - psi)^2 - v; the constraints
// are E[f1] = E[f2] = 0.
struct Features {
  std::vector<double> f1, f2;
};

struct DualState {
  double value = 0.0;  // log partition function
  std::array<double, 2> grad{};
  std::array<double, 3> hess{};  // (11, 12, 22)
  std::vector<double> probs;
};

DualState evaluate(const Features& f, double a, double b) {
  const std::size_t k = f.f1.size();
  DualState s;
  s.probs.resize(k);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    s.probs[i] = a * f.f1[i] + b * f.f2[i];
    top = std::max(top, s.probs[i]);
  }
  double z = 0.0;
  for (auto& e : s.probs) {
    e = std::exp(e - top);
    z += e;
  }
  s.value = top + std::log(z);
  double m1 = 0.0, m2 = 0.0, s11 = 0.0, s12 = 0.0, s22 = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    auto& p = s.probs[i];
    p /= z;
    m1 += p * f.f1[i];
    m2 += p * f.f2[i];
    s11 += p * f.f1[i] * f.f1[i];
    s12 += p * f.f1[i] * f.f2[i];
    s22 += p * f.f2[i] * f.f2[i];
  }
  s.grad = {m1, m2};
  s.hess = {s11 - m1 * m1, s12 - m1 * m2, s22 - m2 * m2};
  return s;
}

double moment_residual(const std::vector<double>& probs, double psi, double v) {
  double m = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) m += (i + 1.0) * probs[i];
  double var = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) var += (i + 1.0 - m) * (i + 1.0 - m) * probs[i];
  return std::max(std::abs(m - psi), std::abs(var - v));
}

MaxEntSolution boundary_solution(Pmf pmf, MaxEntBoundary which) {
  return MaxEntSolution{0.0, 0.0, std::move(pmf), which, 0, 0.0};
}

Pmf two_point(int categories, int low, int high, double psi) {
  std::vector<double> probs(categories, 0.0);
  const double w_high = (psi - low) / (high - low);
  probs[low - 1] = 1.0 - w_high;
  probs[high - 1] = w_high;
  return Pmf::from_weights(std::move(probs));
}

struct NewtonResult {
  double a = 0.0, b = 0.0;
  DualState state;
  int iterations = 0;
  bool ok = false;
};

NewtonResult minimize_dual(const Features& f, double a, double b, const MaxEntOptions& options) {
  NewtonResult r;
  DualState s = evaluate(f, a, b);
  auto grad_norm = [](const DualState& d) { return std::max(std::abs(d.grad[0]), std::abs(d.grad[1])); };
  double residual = grad_norm(s);
  int iter = 0;
  for (; iter < options.max_iter && residual > options.tol; ++iter) {
    double h11 = s.hess[0], h12 = s.hess[1], h22 = s.hess[2];
    double det = h11 * h22 - h12 * h12;
    const double scale = std::max(h11 + h22, 1e-300);
    if (!(det > 1e-14 * scale * scale)) {
      const double ridge = 1e-8 * scale;
      h11 += ridge;
      h22 += ridge;
      det = h11 * h22 - h12 * h12;
    }
    // Newton direction first, steepest descent as the fallback.
    const std::array<std::array<double, 2>, 2> directions = {
        std::array<double, 2>{-(h22 * s.grad[0] - h12 * s.grad[1]) / det, -(h11 * s.grad[1] - h12 * s.grad[0]) / det},
        std::array<double, 2>{-s.grad[0], -s.grad[1]}};
    bool moved = false;
    for (const auto& dir : directions) {
      const double slope = s.grad[0] * dir[0] + s.grad[1] * dir[1];
      if (!(slope < 0.0) || !std::isfinite(slope)) continue;
      double t = 1.0;
      for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
        DualState trial = evaluate(f, a + t * dir[0], b + t * dir[1]);
        // Near the optimum the dual decrease drops below rounding of the log
        // partition function; a smaller gradient is then the better test.
        const bool armijo = trial.value <= s.value + 1e-4 * t * slope;
        const bool polish = residual < 1e-6 && grad_norm(trial) < 0.5 * residual;
        if (armijo || polish) {
          a += t * dir[0];
          b += t * dir[1];
          s = std::move(trial);
          moved = true;
          break;
        }
      }
      if (moved) break;
    }
    residual = grad_norm(s);
    if (!moved) break;
  }
  r.a = a;
  r.b = b;
  r.iterations = iter;
  r.ok = residual <= 0.1 * kAcceptResidual;
  r.state = std::move(s);
  return r;
}

}  // namespace

MaxEntSolution maxent_pmf(double psi, double rho, int categories, const MaxEntOptions& options) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("rho must lie in [0, 1]");
  const auto bounds = variance_bounds(psi, categories);
  psi = std::clamp(psi, 1.0, static_cast<double>(categories));

  const double lo = std::floor(psi);
  const double hi = std::ceil(psi);
  if (psi == 1.0 || psi == categories) {
    return boundary_solution(Pmf::point_mass(categories, static_cast<int>(psi)), MaxEntBoundary::PointMass);
  }
  if (rho >= 1.0 - kBoundarySnap || bounds.v_max - bounds.v_min <= 0.0) {
    if (lo == hi) {
      return boundary_solution(Pmf::point_mass(categories, static_cast<int>(psi)), MaxEntBoundary::PointMass);
    }
    return boundary_solution(two_point(categories, static_cast<int>(lo), static_cast<int>(hi), psi),
                             MaxEntBoundary::MinVariance);
  }
  if (rho <= kBoundarySnap) {
    return boundary_solution(two_point(categories, 1, categories, psi), MaxEntBoundary::MaxVariance);
  }

  const double v = bounds.v_max - rho * (bounds.v_max - bounds.v_min);
  Features f;
  f.f1.resize(categories);
  f.f2.resize(categories);
  for (int k = 1; k <= categories; ++k) {
    f.f1[k - 1] = k - psi;
    f.f2[k - 1] = (k - psi) * (k - psi) - v;
  }

  // lambda1 k + lambda2 k^2 = a (k - psi) + b (k - psi)^2 + const.
  NewtonResult r = minimize_dual(f, options.lambda1_init + 2.0 * options.lambda2_init * psi, options.lambda2_init,
                                 options);
  if (!r.ok && (options.lambda1_init != 0.0 || options.lambda2_init != 0.0)) {
    // A poor warm start can sit where the distribution is nearly degenerate;
    // the uniform start is always well conditioned.
    r = minimize_dual(f, 0.0, 0.0, options);
  }
  const Pmf pmf = Pmf::from_weights(r.state.probs);
  const double residual = moment_residual(std::vector<double>(pmf.probs().begin(), pmf.probs().end()), psi, v);
  if (!(residual <= kAcceptResidual)) {
    std::ostringstream msg;
    msg << "maximum entropy solver did not converge for psi=" << psi << " rho=" << rho
        << " (residual " << residual << ")";
    throw ConvergenceError(msg.str(), residual);
  }
  return MaxEntSolution{r.a - 2.0 * r.b * psi, r.b, pmf, MaxEntBoundary::Interior, r.iterations, residual};
}

}  // namespace acr
