#pragma once

// Special functions needed by the latent distributions and the chi-squared
// law. erf/erfc and lgamma come from <cmath>; the incomplete beta and gamma
// functions are evaluated here by series and Lentz continued fractions
// (relative accuracy around 1e-14 over the ranges used by the fitting code).

namespace acr::special {

double normal_cdf(double x);
// Upper tail 1 - normal_cdf(x), computed without cancellation.
double normal_sf(double x);
double normal_pdf(double x);

double log_beta(double a, double b);

// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double inc_beta(double a, double b, double x);

// Regularized lower and upper incomplete gamma P(a, x) and Q(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

}  // namespace acr::special
