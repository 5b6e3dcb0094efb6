#pragma once

#include <stdexcept>

#include "acr/pmf.hpp"

namespace acr {

enum class MaxEntBoundary { Interior, MinVariance, MaxVariance, PointMass };

// Entropy maximizer on 1..K subject to a mean and a complementary normalized
// variance. Interior solutions have the form p_k ~ exp(lambda1 k + lambda2 k^2);
// the multipliers are reported as 0 for the boundary cases, where they diverge.
struct MaxEntSolution {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  Pmf pmf;
  MaxEntBoundary boundary_case = MaxEntBoundary::Interior;
  int iterations = 0;
  // max(|mean - psi|, |variance - v|) at the returned PMF.
  double residual = 0.0;
};

struct MaxEntOptions {
  double tol = 1e-12;
  int max_iter = 200;
  // Starting multipliers; the default is the uniform distribution.
  double lambda1_init = 0.0;
  double lambda2_init = 0.0;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Damped Newton iteration on the convex dual. Throws ConvergenceError when the
// moment residual stays above 1e-10.
MaxEntSolution maxent_pmf(double psi, double rho, int categories = kDefaultCategories,
                          const MaxEntOptions& options = {});

}  // namespace acr
