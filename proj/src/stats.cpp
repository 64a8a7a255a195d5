#include "feedaudit/stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "feedaudit/special.hpp"

namespace feedaudit {

double mean(std::span<const double> xs) {
    if (xs.empty()) throw InsufficientData("mean of empty sample");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) throw InsufficientData("variance needs at least two values");
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return ss / static_cast<double>(xs.size() - 1);
}

std::vector<double> minmax_normalize(std::span<const double> values) {
    if (values.empty()) throw InsufficientData("minmax_normalize of empty list");
    const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    const double mn = *mn_it, mx = *mx_it;
    std::vector<double> out(values.size());
    if (mx == mn) {
        std::fill(out.begin(), out.end(), 1.0);
        return out;
    }
    const double span = mx - mn;
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - mn) / span;
    return out;
}

std::vector<double> rolling_average(std::span<const double> series, std::size_t window) {
    if (window < 1) throw InvalidSpec("rolling_average window must be >= 1");
    std::vector<double> out(series.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        acc += series[i];
        if (i >= window) acc -= series[i - window];
        const auto k = std::min(window, i + 1);
        out[i] = acc / static_cast<double>(k);
    }
    return out;
}

TTestResult t_test_independent(std::span<const double> a, std::span<const double> b,
                               TTestVariant variant) {
    if (a.size() < 2 || b.size() < 2)
        throw DegenerateSample("t test needs at least two values per sample");
    const double ma = mean(a), mb = mean(b);
    const double va = sample_variance(a), vb = sample_variance(b);
    const auto na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    if (!std::isfinite(va) || !std::isfinite(vb))
        throw DegenerateSample("t test sample has non-finite variance");

    TTestResult r;
    if (variant == TTestVariant::Pooled) {
        const double sp2 = ((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0);
        const double se = std::sqrt(sp2 * (1.0 / na + 1.0 / nb));
        if (se == 0.0) {
            if (ma == mb) return {0.0, na + nb - 2.0, 1.0};
            throw DegenerateSample("pooled t test with zero variance and unequal means");
        }
        r.t = (ma - mb) / se;
        r.df = na + nb - 2.0;
    } else {
        const double sa = va / na, sb = vb / nb;
        const double se = std::sqrt(sa + sb);
        if (se == 0.0) {
            if (ma == mb) return {0.0, na + nb - 2.0, 1.0};
            throw DegenerateSample("Welch t test with zero variance and unequal means");
        }
        r.t = (ma - mb) / se;
        r.df = (sa + sb) * (sa + sb) /
               (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    }
    r.p = student_t_two_sided_p(r.t, r.df);
    return r;
}

ChiSquaredResult chi_squared_test(const std::vector<std::vector<double>>& observed) {
    const std::size_t rows = observed.size();
    if (rows < 2) throw InsufficientData("chi_squared_test needs at least 2 rows");
    const std::size_t cols = observed.front().size();
    if (cols < 2) throw InsufficientData("chi_squared_test needs at least 2 columns");
    for (const auto& row : observed)
        if (row.size() != cols) throw InsufficientData("ragged contingency table");

    std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            if (observed[i][j] < 0.0) throw DataError("negative cell in contingency table");
            row_sum[i] += observed[i][j];
            col_sum[j] += observed[i][j];
            total += observed[i][j];
        }

    ChiSquaredResult r;
    r.df = static_cast<double>((rows - 1) * (cols - 1));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            const double expected = row_sum[i] * col_sum[j] / total;
            if (expected <= 0.0)
                throw ZeroExpectedCell("zero expected count in cell (" + std::to_string(i) + "," +
                                       std::to_string(j) + ")");
            const double d = observed[i][j] - expected;
            r.chi2 += d * d / expected;
        }
    r.p = chi_squared_sf(r.chi2, r.df);
    return r;
}

TrendFit ols_trend(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw InsufficientData("ols_trend: size mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw InsufficientData("ols_trend needs at least two points");
    const double mx = mean(x), my = mean(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw InsufficientData("ols_trend needs at least two distinct x values");

    TrendFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - (fit.intercept + fit.slope * x[i]);
        ssr += e * e;
    }
    if (n > 2) {
        fit.slope_se = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
        const double tq = student_t_quantile(0.975, static_cast<double>(n - 2));
        fit.slope_ci_lo = fit.slope - tq * fit.slope_se;
        fit.slope_ci_hi = fit.slope + tq * fit.slope_se;
    } else {
        fit.slope_se = 0.0;
        fit.slope_ci_lo = fit.slope_ci_hi = fit.slope;
    }
    return fit;
}

namespace {

// R^2 of regressing target on predictors plus an intercept.
double r_squared(const Eigen::MatrixXd& predictors, const Eigen::VectorXd& target) {
    const auto n = predictors.rows();
    Eigen::MatrixXd X(n, predictors.cols() + 1);
    X.col(0).setOnes();
    X.rightCols(predictors.cols()) = predictors;
    const Eigen::VectorXd beta = (X.transpose() * X).ldlt().solve(X.transpose() * target);
    const Eigen::VectorXd resid = target - X * beta;
    const double ssr = resid.squaredNorm();
    const double tss = (target.array() - target.mean()).square().sum();
    if (tss == 0.0) return 1.0;  // constant column: collinear with the intercept
    return 1.0 - ssr / tss;
}

}  // namespace

std::vector<double> vif_scores(const std::vector<std::vector<double>>& columns) {
    const std::size_t k = columns.size();
    if (k < 2) throw InsufficientData("vif_scores needs at least two columns");
    const std::size_t n = columns.front().size();
    for (const auto& c : columns)
        if (c.size() != n) throw InsufficientData("vif_scores: ragged columns");
    if (n <= k) throw InsufficientData("vif_scores needs more rows than columns");

    Eigen::MatrixXd M(n, k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i) M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = columns[j][i];

    std::vector<double> vifs(k);
    for (std::size_t j = 0; j < k; ++j) {
        Eigen::MatrixXd others(n, k - 1);
        Eigen::Index col = 0;
        for (std::size_t m = 0; m < k; ++m)
            if (m != j) others.col(col++) = M.col(static_cast<Eigen::Index>(m));
        const double r2 = r_squared(others, M.col(static_cast<Eigen::Index>(j)));
        // numeric slack: treat R^2 within 1e-12 of 1 as exact collinearity
        if (r2 >= 1.0 - 1e-12)
            vifs[j] = std::numeric_limits<double>::infinity();
        else
            vifs[j] = 1.0 / (1.0 - r2);
    }
    return vifs;
}

VifScreenResult vif_screen(const std::vector<std::vector<double>>& columns, double threshold) {
    VifScreenResult result;
    result.kept.resize(columns.size());
    std::iota(result.kept.begin(), result.kept.end(), std::size_t{0});

    for (;;) {
        if (result.kept.size() < 2) {
            result.final_vifs.assign(result.kept.size(), 1.0);
            return result;
        }
        std::vector<std::vector<double>> current;
        current.reserve(result.kept.size());
        for (auto idx : result.kept) current.push_back(columns[idx]);
        auto vifs = vif_scores(current);
        std::size_t worst = 0;
        for (std::size_t j = 1; j < vifs.size(); ++j)
            if (vifs[j] > vifs[worst]) worst = j;
        if (vifs[worst] < threshold) {
            result.final_vifs = std::move(vifs);
            return result;
        }
        result.dropped.push_back(result.kept[worst]);
        result.kept.erase(result.kept.begin() + static_cast<std::ptrdiff_t>(worst));
    }
}

}  // namespace feedaudit
