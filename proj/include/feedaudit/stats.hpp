#pragma once

#include <span>
#include <string>
#include <vector>

#include "feedaudit/core.hpp"

namespace feedaudit {

struct DegenerateSample : DataError {
    using DataError::DataError;
};
struct ZeroExpectedCell : DataError {
    using DataError::DataError;
};

double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);  // ddof = 1

// (x - min) / (max - min); a constant column maps to all 1s so degenerate
// metrics fall back to uniform sampling weights.
std::vector<double> minmax_normalize(std::span<const double> values);

// Trailing mean with prefix shrinkage: element i averages the last
// min(window, i+1) values, so the output has the input's length.
std::vector<double> rolling_average(std::span<const double> series, std::size_t window);

enum class TTestVariant { Welch, Pooled };

struct TTestResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
};

TTestResult t_test_independent(std::span<const double> a, std::span<const double> b,
                               TTestVariant variant = TTestVariant::Welch);

struct ChiSquaredResult {
    double chi2 = 0.0;
    double df = 0.0;
    double p = 1.0;
};

// Pearson chi-squared on a contingency table with expected counts from the
// row/column marginals.
ChiSquaredResult chi_squared_test(const std::vector<std::vector<double>>& observed);

struct TrendFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double slope_ci_lo = 0.0;
    double slope_ci_hi = 0.0;
    std::size_t n = 0;
};

// OLS of y on x with a 95% CI on the slope from the usual slope variance.
TrendFit ols_trend(std::span<const double> x, std::span<const double> y);

// VIF_j = 1 / (1 - R2_j) from regressing column j on the remaining columns
// plus an intercept. Exact collinearity is reported as +inf, not an error.
std::vector<double> vif_scores(const std::vector<std::vector<double>>& columns);

struct VifScreenResult {
    std::vector<std::size_t> kept;     // indices into the input columns
    std::vector<std::size_t> dropped;  // in drop order, largest VIF first
    std::vector<double> final_vifs;    // aligned with kept
};

// Drops one column at a time (largest VIF first) and recomputes until all
// remaining columns sit below the threshold.
VifScreenResult vif_screen(const std::vector<std::vector<double>>& columns, double threshold = 5.0);

}  // namespace feedaudit
