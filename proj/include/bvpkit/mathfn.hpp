#pragma once

namespace bvpkit::mathfn {

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double x, double a, double b);

/// Regularized lower incomplete gamma P(a, x).
double regularized_lower_gamma(double a, double x);

/// Survival function of the F distribution, P[F(d1, d2) > x].
double f_sf(double x, double d1, double d2);

/// Chi-square CDF with k degrees of freedom.
double chi2_cdf(double x, double k);

/// Chi-square quantile (inverse CDF), bracketed bisection on chi2_cdf.
double chi2_quantile(double p, double k);

}  // namespace bvpkit::mathfn
