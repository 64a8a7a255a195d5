#include "feedaudit/pca.hpp"

#include <cmath>
#include <cstdlib>

namespace feedaudit {

std::vector<double> pca_first_component_weights(const std::vector<std::vector<double>>& columns) {
    const std::size_t d = columns.size();
    if (d < 2) throw InsufficientData("pca needs at least two metrics");
    const std::size_t n = columns.front().size();
    if (n < 2) throw InsufficientData("pca needs at least two items");
    for (const auto& c : columns)
        if (c.size() != n) throw InsufficientData("pca: ragged columns");

    // column covariance
    std::vector<double> means(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        for (double x : columns[j]) means[j] += x;
        means[j] /= static_cast<double>(n);
    }
    std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
    double trace = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a; b < d; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                s += (columns[a][i] - means[a]) * (columns[b][i] - means[b]);
            s /= static_cast<double>(n - 1);
            cov[a][b] = cov[b][a] = s;
        }
        trace += cov[a][a];
    }
    if (trace <= 0.0) throw ZeroVariance("pca: all columns constant");

    // power iteration with a symmetric start so exactly-symmetric inputs stay
    // symmetric through every step
    std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d)));
    std::vector<double> w(d, 0.0);
    double lambda = 0.0;
    constexpr double kResidualTol = 1e-10;
    constexpr int kMaxIter = 200000;
    bool done = false;
    for (int it = 0; it < kMaxIter && !done; ++it) {
        for (std::size_t a = 0; a < d; ++a) {
            double s = 0.0;
            for (std::size_t b = 0; b < d; ++b) s += cov[a][b] * v[b];
            w[a] = s;
        }
        lambda = 0.0;
        for (std::size_t a = 0; a < d; ++a) lambda += v[a] * w[a];
        double resid = 0.0;
        for (std::size_t a = 0; a < d; ++a) {
            const double r = w[a] - lambda * v[a];
            resid += r * r;
        }
        done = std::sqrt(resid) < kResidualTol;
        double norm = 0.0;
        for (double x : w) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) throw ZeroVariance("pca: start vector orthogonal to dominant component");
        for (std::size_t a = 0; a < d; ++a) v[a] = w[a] / norm;
    }
    if (!done) throw DataError("pca: power iteration did not reach the residual tolerance");

    double sum = 0.0;
    for (double x : v) sum += x;
    if (sum < 0.0) {
        for (auto& x : v) x = -x;
        sum = -sum;
    }
    if (sum == 0.0) throw DataError("pca: loading sum is zero; weights undefined");
    for (auto& x : v) x /= sum;
    return v;
}

}  // namespace feedaudit
