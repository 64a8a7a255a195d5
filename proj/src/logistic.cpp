#include "feedaudit/logistic.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "feedaudit/special.hpp"

namespace feedaudit {

namespace {

constexpr double kScoreTol = 1e-8;
constexpr double kSeparationBound = 30.0;  // |beta| beyond exp(30) odds: separation
constexpr double kZ975 = 1.959963984540054;

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& design) {
    const auto n = static_cast<Eigen::Index>(design.size());
    if (n == 0) throw InsufficientData("logistic_fit: empty design");
    const auto k = static_cast<Eigen::Index>(design.front().size());
    if (k == 0) throw InsufficientData("logistic_fit: design has no columns");
    Eigen::MatrixXd X(n, k);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(design[static_cast<std::size_t>(i)].size()) != k)
            throw InsufficientData("logistic_fit: ragged design matrix");
        for (Eigen::Index j = 0; j < k; ++j)
            X(i, j) = design[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return X;
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace

double logistic_log_likelihood(const std::vector<std::vector<double>>& design,
                               const std::vector<int>& outcomes,
                               const std::vector<double>& beta, double ridge) {
    double ll = 0.0;
    for (std::size_t i = 0; i < design.size(); ++i) {
        double eta = 0.0;
        for (std::size_t j = 0; j < beta.size(); ++j) eta += design[i][j] * beta[j];
        // log(sigma(eta)) and log(1-sigma(eta)) in a stable form
        const double log1pe = eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
        ll += outcomes[i] == 1 ? eta - log1pe : -log1pe;
    }
    if (ridge > 0.0) {
        double ss = 0.0;
        for (double b : beta) ss += b * b;
        ll -= 0.5 * ridge * ss;
    }
    return ll;
}

std::vector<double> logistic_score(const std::vector<std::vector<double>>& design,
                                   const std::vector<int>& outcomes,
                                   const std::vector<double>& beta, double ridge) {
    std::vector<double> score(beta.size(), 0.0);
    for (std::size_t i = 0; i < design.size(); ++i) {
        double eta = 0.0;
        for (std::size_t j = 0; j < beta.size(); ++j) eta += design[i][j] * beta[j];
        const double resid = static_cast<double>(outcomes[i]) - sigmoid(eta);
        for (std::size_t j = 0; j < beta.size(); ++j) score[j] += design[i][j] * resid;
    }
    if (ridge > 0.0)
        for (std::size_t j = 0; j < beta.size(); ++j) score[j] -= ridge * beta[j];
    return score;
}

RegressionFit logistic_fit(const std::vector<std::vector<double>>& design,
                           const std::vector<int>& outcomes,
                           const std::vector<std::string>& names, double ridge,
                           int max_iterations) {
    const Eigen::MatrixXd X = to_matrix(design);
    const auto n = X.rows();
    const auto k = X.cols();
    if (static_cast<Eigen::Index>(outcomes.size()) != n)
        throw InsufficientData("logistic_fit: outcome length mismatch");
    if (static_cast<Eigen::Index>(names.size()) != k)
        throw InsufficientData("logistic_fit: name count mismatch");
    for (int y : outcomes)
        if (y != 0 && y != 1) throw DataError("logistic_fit: outcomes must be 0/1");
    if (ridge < 0.0) throw InvalidSpec("logistic_fit: ridge must be non-negative");

    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = outcomes[static_cast<std::size_t>(i)];

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
    Eigen::MatrixXd info(k, k);
    int iter = 0;
    bool converged = false;

    for (iter = 1; iter <= max_iterations; ++iter) {
        const Eigen::VectorXd eta = X * beta;
        Eigen::VectorXd mu(n), w(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            mu(i) = sigmoid(eta(i));
            w(i) = mu(i) * (1.0 - mu(i));
        }
        Eigen::VectorXd score = X.transpose() * (y - mu);
        info = X.transpose() * w.asDiagonal() * X;
        if (ridge > 0.0) {
            score -= ridge * beta;
            info += ridge * Eigen::MatrixXd::Identity(k, k);
        }
        if (score.lpNorm<Eigen::Infinity>() < kScoreTol) {
            converged = true;
            break;
        }
        Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
        if (ldlt.info() != Eigen::Success)
            throw SingularDesign("logistic_fit: information matrix not positive definite");
        const Eigen::VectorXd step = ldlt.solve(score);
        if (!step.allFinite())
            throw SingularDesign("logistic_fit: singular IRLS system");
        beta += step;
        if (beta.lpNorm<Eigen::Infinity>() > kSeparationBound)
            throw CompleteSeparation(
                "logistic_fit: coefficients diverging (likely complete separation); "
                "set ridge > 0 to regularize");
    }
    if (!converged)
        throw Nonconvergence("logistic_fit: IRLS did not converge in " +
                             std::to_string(max_iterations) + " iterations");

    // observed information at the solution for the covariance
    const Eigen::MatrixXd cov = info.inverse();

    RegressionFit fit;
    fit.names = names;
    fit.converged = true;
    fit.iterations = iter;
    fit.coefficients.resize(static_cast<std::size_t>(k));
    fit.std_errors.resize(static_cast<std::size_t>(k));
    fit.odds_ratios.resize(static_cast<std::size_t>(k));
    fit.or_ci_lo.resize(static_cast<std::size_t>(k));
    fit.or_ci_hi.resize(static_cast<std::size_t>(k));
    fit.p_values.resize(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < k; ++j) {
        const auto js = static_cast<std::size_t>(j);
        fit.coefficients[js] = beta(j);
        fit.std_errors[js] = std::sqrt(cov(j, j));
        fit.odds_ratios[js] = std::exp(beta(j));
        fit.or_ci_lo[js] = std::exp(beta(j) - kZ975 * fit.std_errors[js]);
        fit.or_ci_hi[js] = std::exp(beta(j) + kZ975 * fit.std_errors[js]);
        fit.p_values[js] =
            fit.std_errors[js] > 0.0 ? normal_two_sided_p(beta(j) / fit.std_errors[js]) : 0.0;
    }
    std::vector<double> beta_std(fit.coefficients.begin(), fit.coefficients.end());
    fit.log_likelihood = logistic_log_likelihood(design, outcomes, beta_std, 0.0);
    return fit;
}

}  // namespace feedaudit
