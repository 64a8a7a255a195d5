#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "feedaudit/logistic.hpp"
#include "feedaudit/rng.hpp"

using namespace feedaudit;

namespace {

struct Synthetic {
    std::vector<std::vector<double>> design;
    std::vector<int> outcomes;
};

Synthetic simulate(const std::vector<double>& beta, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Synthetic data;
    data.design.reserve(n);
    data.outcomes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x{1.0};
        for (std::size_t j = 1; j < beta.size(); ++j) x.push_back(rng.normal());
        double eta = 0.0;
        for (std::size_t j = 0; j < beta.size(); ++j) eta += beta[j] * x[j];
        const double p = 1.0 / (1.0 + std::exp(-eta));
        data.outcomes.push_back(rng.uniform() < p ? 1 : 0);
        data.design.push_back(std::move(x));
    }
    return data;
}

}  // namespace

TEST_CASE("no-signal balanced data gives near-zero slopes and OR near 1") {
    const auto data = simulate({0.0, 0.0, 0.0}, 4000, 21);
    const auto fit = logistic_fit(data.design, data.outcomes, {"intercept", "x1", "x2"});
    REQUIRE(fit.converged);
    for (std::size_t j = 1; j < fit.coefficients.size(); ++j) {
        CHECK(std::fabs(fit.coefficients[j]) < 3.0 * fit.std_errors[j]);
        CHECK(fit.odds_ratios[j] == doctest::Approx(1.0).epsilon(0.2));
    }
}

TEST_CASE("IRLS recovers a known generative model within 3 SE") {
    const std::vector<double> truth{-0.3, 0.5, -1.0};
    const auto data = simulate(truth, 5000, 22);
    const auto fit = logistic_fit(data.design, data.outcomes, {"intercept", "x1", "x2"});
    REQUIRE(fit.converged);
    for (std::size_t j = 0; j < truth.size(); ++j)
        CHECK(std::fabs(fit.coefficients[j] - truth[j]) < 3.0 * fit.std_errors[j]);

    // score vector at the solution is numerically zero
    const auto score = logistic_score(data.design, data.outcomes, fit.coefficients);
    for (double s : score) CHECK(std::fabs(s) < 1e-8);

    // odds ratios are exactly exp(beta)
    for (std::size_t j = 0; j < truth.size(); ++j)
        CHECK(fit.odds_ratios[j] == doctest::Approx(std::exp(fit.coefficients[j])).epsilon(1e-12));
}

TEST_CASE("analytic score agrees with finite-difference gradients to 1e-5 relative") {
    const auto data = simulate({0.2, 0.7, -0.4}, 800, 23);
    const std::vector<double> beta{0.1, -0.2, 0.3};
    const auto score = logistic_score(data.design, data.outcomes, beta, 0.5);
    const double h = 1e-6;
    for (std::size_t j = 0; j < beta.size(); ++j) {
        auto hi = beta, lo = beta;
        hi[j] += h;
        lo[j] -= h;
        const double fd = (logistic_log_likelihood(data.design, data.outcomes, hi, 0.5) -
                           logistic_log_likelihood(data.design, data.outcomes, lo, 0.5)) /
                          (2.0 * h);
        CHECK(score[j] == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("a standard odds-ratio conversion fixture") {
    // exp(beta) with beta = 1.0314 must give 2.8051 at 4 decimal places
    CHECK(std::exp(1.0314) == doctest::Approx(2.8051).epsilon(1e-4));
}

TEST_CASE("complete separation is detected and ridge is the documented remedy") {
    // outcome is a deterministic threshold of x: perfectly separable
    std::vector<std::vector<double>> design;
    std::vector<int> outcomes;
    Rng rng(24);
    for (int i = 0; i < 200; ++i) {
        const double x = rng.normal();
        design.push_back({1.0, x});
        outcomes.push_back(x > 0.0 ? 1 : 0);
    }
    CHECK_THROWS_AS(logistic_fit(design, outcomes, {"intercept", "x"}), CompleteSeparation);

    const auto fit = logistic_fit(design, outcomes, {"intercept", "x"}, /*ridge=*/1.0);
    CHECK(fit.converged);
    CHECK(fit.coefficients[1] > 0.0);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(logistic_fit({{1.0}}, {2}, {"intercept"}), DataError);
    CHECK_THROWS_AS(logistic_fit({{1.0}}, {1, 0}, {"intercept"}), InsufficientData);
    CHECK_THROWS_AS(logistic_fit({{1.0}}, {1}, {"a", "b"}), InsufficientData);
}
