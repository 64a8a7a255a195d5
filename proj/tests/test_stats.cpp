#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "feedaudit/rng.hpp"
#include "feedaudit/stats.hpp"

using namespace feedaudit;

TEST_CASE("minmax_normalize") {
    CHECK(minmax_normalize(std::vector<double>{0, 5, 10}) == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(minmax_normalize(std::vector<double>{7, 7, 7}) == std::vector<double>{1.0, 1.0, 1.0});
    CHECK(minmax_normalize(std::vector<double>{-2, 0, 2}) == std::vector<double>{0.0, 0.5, 1.0});
    CHECK_THROWS_AS(minmax_normalize(std::vector<double>{}), InsufficientData);
}

TEST_CASE("rolling_average trailing windows with prefix shrinkage") {
    const std::vector<double> s{0, 1, 2, 3};
    CHECK(rolling_average(s, 1) == s);
    CHECK(rolling_average(std::vector<double>{0, 1}, 2) == std::vector<double>{0.0, 0.5});
    const auto r = rolling_average(s, 10);
    CHECK(r[0] == 0.0);
    CHECK(r[1] == doctest::Approx(0.5));
    CHECK(r[2] == doctest::Approx(1.0));
    CHECK(r[3] == doctest::Approx(1.5));
    CHECK_THROWS_AS(rolling_average(s, 0), InvalidSpec);
}

TEST_CASE("t test: identical samples") {
    const std::vector<double> a{1, 2, 3, 4};
    const auto r = t_test_independent(a, a, TTestVariant::Welch);
    CHECK(r.t == 0.0);
    CHECK(r.p == doctest::Approx(1.0));
}

TEST_CASE("t test: pooled hand fixture") {
    const std::vector<double> a{1, 2, 3}, b{2, 3, 4};
    const auto r = t_test_independent(a, b, TTestVariant::Pooled);
    CHECK(r.t == doctest::Approx(-1.224744871391589).epsilon(1e-10));
    CHECK(r.df == doctest::Approx(4.0));
    CHECK(r.p == doctest::Approx(0.28786413472669081).epsilon(1e-8));
}

TEST_CASE("t test: Welch reference fixture") {
    const std::vector<double> a{27.5, 21.0, 19.0, 23.6, 17.0, 17.9, 16.9, 20.1,
                                21.9, 22.6, 23.1, 19.6, 19.0, 21.7, 21.4};
    const std::vector<double> b{27.1, 22.0, 20.8, 23.4, 23.4, 23.5, 25.8, 22.0,
                                24.8, 20.2, 21.9, 22.1, 22.9, 30.5, 24.2};
    const auto r = t_test_independent(a, b, TTestVariant::Welch);
    CHECK(r.t == doctest::Approx(-2.841322271).epsilon(1e-4));
    CHECK(r.df == doctest::Approx(27.88250984).epsilon(1e-4));
    CHECK(r.p == doctest::Approx(0.008303425483).epsilon(1e-4));
}

TEST_CASE("t test rejects degenerate samples") {
    CHECK_THROWS_AS(t_test_independent(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}),
                    DegenerateSample);
}

TEST_CASE("chi-squared: observed equals expected") {
    const auto r = chi_squared_test({{10, 10}, {10, 10}});
    CHECK(r.chi2 == doctest::Approx(0.0));
    CHECK(r.p == doctest::Approx(1.0));
}

TEST_CASE("chi-squared: 2x2 hand fixture") {
    const auto r = chi_squared_test({{10, 20}, {20, 10}});
    CHECK(r.chi2 == doctest::Approx(6.666666666666667).epsilon(1e-12));
    CHECK(r.df == 1.0);
    CHECK(r.p == doctest::Approx(0.0098232745075192349).epsilon(1e-8));
}

TEST_CASE("chi-squared: zero expected cell is an error") {
    CHECK_THROWS_AS(chi_squared_test({{0, 0}, {5, 5}}), ZeroExpectedCell);
}

TEST_CASE("ols_trend on constant and exactly linear data") {
    const std::vector<double> x{0, 1, 2, 3, 4};
    const std::vector<double> constant{2.5, 2.5, 2.5, 2.5, 2.5};
    auto fit = ols_trend(x, constant);
    CHECK(fit.slope == doctest::Approx(0.0).scale(1).epsilon(1e-14));
    CHECK(fit.intercept == doctest::Approx(2.5).epsilon(1e-14));

    std::vector<double> linear;
    for (double xi : x) linear.push_back(3.0 - 0.7 * xi);
    fit = ols_trend(x, linear);
    CHECK(fit.slope == doctest::Approx(-0.7).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fit.slope_se == doctest::Approx(0.0).scale(1).epsilon(1e-12));

    CHECK_THROWS_AS(ols_trend(std::vector<double>{1, 1}, std::vector<double>{2, 3}),
                    InsufficientData);
}

namespace {

// brute-force R^2 via dense least squares, independent of vif_scores' path
double brute_r2(const std::vector<std::vector<double>>& cols, std::size_t target) {
    const auto n = static_cast<Eigen::Index>(cols.front().size());
    Eigen::MatrixXd X(n, static_cast<Eigen::Index>(cols.size()));  // intercept replaces target
    Eigen::VectorXd y(n);
    Eigen::Index cidx = 0;
    X.col(cidx++).setOnes();
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (j == target) {
            for (Eigen::Index i = 0; i < n; ++i) y(i) = cols[j][static_cast<std::size_t>(i)];
            continue;
        }
        for (Eigen::Index i = 0; i < n; ++i) X(i, cidx) = cols[j][static_cast<std::size_t>(i)];
        ++cidx;
    }
    const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
    const double ssr = (y - X * beta).squaredNorm();
    const double tss = (y.array() - y.mean()).square().sum();
    return 1.0 - ssr / tss;
}

}  // namespace

TEST_CASE("vif: orthogonal columns give 1.0") {
    std::vector<std::vector<double>> cols{{1, 1, -1, -1, 0, 0}, {1, -1, 1, -1, 0, 0},
                                          {0, 0, 0, 0, 1, -1}};
    for (double v : vif_scores(cols)) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("vif: duplicated column reports +inf and is screened out") {
    Rng rng(5);
    std::vector<double> base(40), noise(40);
    for (auto& x : base) x = rng.normal();
    for (auto& x : noise) x = rng.normal();
    std::vector<std::vector<double>> cols{base, base, noise};
    const auto vifs = vif_scores(cols);
    CHECK(std::isinf(vifs[0]));
    CHECK(std::isinf(vifs[1]));

    const auto screen = vif_screen(cols, 5.0);
    CHECK(screen.dropped.size() == 1);
    CHECK((screen.dropped[0] == 0 || screen.dropped[0] == 1));
    CHECK(screen.kept.size() == 2);
    for (double v : screen.final_vifs) CHECK(v < 5.0);
}

TEST_CASE("vif matches brute-force 1/(1-R2) on a noisy near-duplicate") {
    Rng rng(6);
    const std::size_t n = 120;
    std::vector<std::vector<double>> cols(3, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        cols[0][i] = rng.normal();
        cols[1][i] = cols[0][i] + 0.05 * rng.normal();  // near-collinear
        cols[2][i] = rng.normal();
    }
    const auto vifs = vif_scores(cols);
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const double expected = 1.0 / (1.0 - brute_r2(cols, j));
        CHECK(vifs[j] == doctest::Approx(expected).epsilon(1e-8));
    }
    CHECK(vifs[0] > 5.0);  // the pair really is collinear enough to screen
}
