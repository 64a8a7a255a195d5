#pragma once

#include <string>
#include <vector>

#include "feedaudit/core.hpp"

namespace feedaudit {

struct Nonconvergence : DataError {
    using DataError::DataError;
};
struct CompleteSeparation : DataError {
    using DataError::DataError;
};
struct SingularDesign : DataError {
    using DataError::DataError;
};

struct RegressionFit {
    std::vector<std::string> names;
    std::vector<double> coefficients;
    std::vector<double> std_errors;
    std::vector<double> odds_ratios;
    std::vector<double> or_ci_lo;
    std::vector<double> or_ci_hi;
    std::vector<double> p_values;  // Wald, two-sided
    bool converged = false;
    int iterations = 0;
    double log_likelihood = 0.0;
};

// Maximum-likelihood logistic regression by iteratively reweighted least
// squares. Convergence requires every component of the (ridge-penalized)
// score vector to fall below 1e-8. Standard errors come from the observed
// information at the solution; odds ratios are exp(beta) with 95% Wald CIs.
//
// design: row-major rows x columns, caller supplies the intercept column.
// ridge > 0 penalizes 0.5 * ridge * |beta|^2 (intercept included) and is the
// documented remedy when separation is reported.
RegressionFit logistic_fit(const std::vector<std::vector<double>>& design,
                           const std::vector<int>& outcomes,
                           const std::vector<std::string>& names, double ridge = 0.0,
                           int max_iterations = 100);

// Log-likelihood at a fixed coefficient vector; exposed for gradient checks.
double logistic_log_likelihood(const std::vector<std::vector<double>>& design,
                               const std::vector<int>& outcomes,
                               const std::vector<double>& beta, double ridge = 0.0);

// Penalized score vector (gradient of the penalized log-likelihood).
std::vector<double> logistic_score(const std::vector<std::vector<double>>& design,
                                   const std::vector<int>& outcomes,
                                   const std::vector<double>& beta, double ridge = 0.0);

}  // namespace feedaudit
