#pragma once

namespace feedaudit {

// Regularized incomplete gamma P(s,x) and Q(s,x) = 1 - P(s,x).
// Series expansion for x < s+1, Lentz continued fraction otherwise.
double regularized_gamma_p(double s, double x);
double regularized_gamma_q(double s, double x);

// Regularized incomplete beta I_x(a,b) via Lentz continued fraction.
double regularized_beta(double a, double b, double x);

// Student-t distribution, df > 0.
double student_t_cdf(double t, double df);
double student_t_two_sided_p(double t, double df);
// Inverse CDF by bisection on the monotone CDF.
double student_t_quantile(double p, double df);

// Chi-squared survival function, df > 0.
double chi_squared_sf(double x, double df);

// Standard normal two-sided p for a z statistic.
double normal_two_sided_p(double z);

}  // namespace feedaudit
