#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "feedaudit/pca.hpp"
#include "feedaudit/rng.hpp"

using namespace feedaudit;

namespace {

// Brute-force oracle: dense symmetric eigendecomposition of the covariance,
// same sign/normalization convention as the implementation under test.
std::vector<double> dense_first_component(const std::vector<std::vector<double>>& cols) {
    const auto d = static_cast<Eigen::Index>(cols.size());
    const auto n = static_cast<Eigen::Index>(cols.front().size());
    Eigen::MatrixXd X(n, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            X(i, j) = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    const Eigen::MatrixXd centered = X.rowwise() - X.colwise().mean();
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    Eigen::VectorXd v = solver.eigenvectors().col(d - 1);  // largest eigenvalue is last
    if (v.sum() < 0.0) v = -v;
    v /= v.sum();
    return {v.data(), v.data() + v.size()};
}

}  // namespace

TEST_CASE("two identical columns give exactly [0.5, 0.5]") {
    std::vector<double> col{0.1, 0.9, 0.4, 0.7, 0.2};
    const auto w = pca_first_component_weights({col, col});
    REQUIRE(w.size() == 2);
    CHECK(w[0] == 0.5);
    CHECK(w[1] == 0.5);
}

TEST_CASE("constant column gets weight ~0 next to a varying one") {
    std::vector<double> constant(6, 0.3), varying{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    const auto w = pca_first_component_weights({constant, varying});
    CHECK(std::fabs(w[0] - 0.0) < 1e-8);
    CHECK(std::fabs(w[1] - 1.0) < 1e-8);
}

TEST_CASE("random 3-6 column fixtures match the dense eigensolver to 1e-8") {
    Rng rng(31);
    for (int d = 3; d <= 6; ++d) {
        for (int trial = 0; trial < 5; ++trial) {
            const std::size_t n = 40;
            std::vector<std::vector<double>> cols(static_cast<std::size_t>(d),
                                                  std::vector<double>(n));
            // correlated columns: shared factor plus noise, min-max style range
            std::vector<double> factor(n);
            for (auto& f : factor) f = rng.uniform();
            for (auto& col : cols) {
                const double load = 0.3 + rng.uniform();
                for (std::size_t i = 0; i < n; ++i)
                    col[i] = load * factor[i] + 0.25 * rng.uniform();
            }
            const auto w = pca_first_component_weights(cols);
            const auto expected = dense_first_component(cols);
            REQUIRE(w.size() == expected.size());
            for (std::size_t j = 0; j < w.size(); ++j)
                CHECK(w[j] == doctest::Approx(expected[j]).epsilon(1e-8));

            const double sum = std::accumulate(w.begin(), w.end(), 0.0);
            CHECK(std::fabs(sum - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("weights are invariant under item (row) permutation") {
    Rng rng(32);
    const std::size_t n = 25;
    std::vector<std::vector<double>> cols(4, std::vector<double>(n));
    for (auto& col : cols)
        for (auto& x : col) x = rng.uniform();
    const auto w = pca_first_component_weights(cols);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    std::vector<std::vector<double>> shuffled(4, std::vector<double>(n));
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t i = 0; i < n; ++i) shuffled[j][i] = cols[j][perm[i]];
    const auto w2 = pca_first_component_weights(shuffled);
    for (std::size_t j = 0; j < w.size(); ++j)
        CHECK(w[j] == doctest::Approx(w2[j]).epsilon(1e-9));
}

TEST_CASE("all-constant input raises ZeroVariance") {
    std::vector<double> a(5, 1.0), b(5, 2.0);
    CHECK_THROWS_AS(pca_first_component_weights({a, b}), ZeroVariance);
}

TEST_CASE("shape validation") {
    CHECK_THROWS_AS(pca_first_component_weights({{1.0, 2.0}}), InsufficientData);
    CHECK_THROWS_AS(pca_first_component_weights({{1.0}, {2.0}}), InsufficientData);
}
