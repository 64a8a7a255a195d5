#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "feedaudit/counterfactual.hpp"
#include "feedaudit/rng.hpp"

using namespace feedaudit;

TEST_CASE("recency_scale forms") {
    CHECK(recency_scale(3.7, 0.0, RecencyMode::None, 1.0) == 3.7);
    CHECK(recency_scale(3.7, 0.0, RecencyMode::Linear, 1.0) == 3.7);
    CHECK(recency_scale(3.7, 0.0, RecencyMode::Exponential, 1.0) == 3.7);
    CHECK(recency_scale(10.0, 1.0, RecencyMode::Linear, 1.0) == doctest::Approx(5.0));
    CHECK(recency_scale(10.0, 1.0, RecencyMode::Exponential, std::log(2.0)) ==
          doctest::Approx(5.0).epsilon(1e-12));
    CHECK_THROWS_AS(recency_scale(-1.0, 0.0, RecencyMode::None, 1.0), InvalidSpec);
}

TEST_CASE("closed-form weighted skew on the two-video pool") {
    const std::vector<double> weights{3.0, 1.0};
    const std::vector<Alignment> aligns{Alignment::RepAligned, Alignment::DemAligned};
    CHECK(closed_form_weighted_skew(weights, aligns) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("bootstrap mean is within 3 standard errors of the closed form") {
    const std::vector<double> weights{3.0, 1.0};
    const std::vector<Alignment> aligns{Alignment::RepAligned, Alignment::DemAligned};
    Rng rng(61);
    const auto est = weighted_skew_sample(weights, aligns, 400, 200, rng);
    CHECK(std::fabs(est.mean - 0.5) <= 3.0 * est.std_error);
}

TEST_CASE("equal weights on balanced alignments give expected skew 0") {
    const std::vector<double> weights{1, 1, 1, 1};
    const std::vector<Alignment> aligns{Alignment::RepAligned, Alignment::DemAligned,
                                        Alignment::RepAligned, Alignment::DemAligned};
    CHECK(closed_form_weighted_skew(weights, aligns) == 0.0);
    Rng rng(62);
    const auto est = weighted_skew_sample(weights, aligns, 100, 300, rng);
    CHECK(std::fabs(est.mean) <= 3.0 * est.std_error + 1e-12);
}

TEST_CASE("n=2 draws over a 3-video pool match exhaustive enumeration") {
    // weights 1,2,3 over alignments Rep, Dem, Neutral
    const std::vector<double> weights{1.0, 2.0, 3.0};
    const std::vector<Alignment> aligns{Alignment::RepAligned, Alignment::DemAligned,
                                        Alignment::Neutral};
    const double W = 6.0;

    // enumerate all 9 ordered outcomes: skew value -> probability
    std::map<double, double> expected_dist;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            const double p = (weights[a] / W) * (weights[b] / W);
            int rep = 0, dem = 0;
            for (int v : {a, b}) {
                if (aligns[v] == Alignment::RepAligned) ++rep;
                if (aligns[v] == Alignment::DemAligned) ++dem;
            }
            expected_dist[(rep - dem) / 2.0] += p;
        }

    // frequencies of per-rep skew values over many reps
    Rng rng(63);
    const int reps = 40000;
    std::map<double, int> observed;
    for (int r = 0; r < reps; ++r) {
        const auto est = weighted_skew_sample(weights, aligns, 2, 1, rng);
        observed[est.mean] += 1;
    }
    for (const auto& [skew, p] : expected_dist) {
        const double n_expected = reps * p;
        const double sigma = std::sqrt(reps * p * (1.0 - p));
        CHECK(std::fabs(observed[skew] - n_expected) <= 3.0 * sigma + 1.0);
    }
}

TEST_CASE("MC mean tracks the closed form across random pools (4 SE property)") {
    Rng pool_rng(64);
    int within = 0;
    const int trials = 60;
    for (int t = 0; t < trials; ++t) {
        const std::size_t n = 3 + pool_rng.below(40);
        std::vector<double> weights(n);
        std::vector<Alignment> aligns(n);
        for (std::size_t i = 0; i < n; ++i) {
            weights[i] = pool_rng.uniform() * 5.0 + 0.01;
            aligns[i] = static_cast<Alignment>(pool_rng.below(3));
        }
        const double cf = closed_form_weighted_skew(weights, aligns);
        Rng rng(mix_seed(65, static_cast<std::uint64_t>(t)));
        const auto est = weighted_skew_sample(weights, aligns, 200, 100, rng);
        if (est.std_error > 0.0 && std::fabs(est.mean - cf) < 4.0 * est.std_error) ++within;
    }
    CHECK(within >= trials - 2);  // 4 SE misses should be rare
}

TEST_CASE("scaling every weight by a power of two leaves the sampler unchanged") {
    const std::vector<double> weights{0.5, 1.25, 2.0, 0.125};
    std::vector<double> scaled;
    for (double w : weights) scaled.push_back(w * 4.0);  // exact in binary floating point
    const std::vector<Alignment> aligns{Alignment::RepAligned, Alignment::DemAligned,
                                        Alignment::Neutral, Alignment::RepAligned};
    CHECK(closed_form_weighted_skew(weights, aligns) ==
          closed_form_weighted_skew(scaled, aligns));
    Rng r1(66), r2(66);
    const auto a = weighted_skew_sample(weights, aligns, 50, 50, r1);
    const auto b = weighted_skew_sample(scaled, aligns, 50, 50, r2);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
}

namespace {

CfPoolItem item(Alignment a, double likes, double age_weeks = 0.0, bool verified = false) {
    CfPoolItem it;
    it.alignment = a;
    it.likes = likes;
    it.age_weeks = age_weeks;
    it.verified = verified;
    return it;
}

}  // namespace

TEST_CASE("model_weights: single metric is min-max normalized then recency scaled") {
    std::vector<CfPoolItem> pool{item(Alignment::RepAligned, 0.0),
                                 item(Alignment::DemAligned, 5.0),
                                 item(Alignment::Neutral, 10.0)};
    CounterfactualModelSpec spec;
    spec.metric = CfMetric::Likes;
    auto w = model_weights(pool, spec);
    CHECK(w == std::vector<double>{0.0, 0.5, 1.0});

    pool[2].age_weeks = 1.0;
    spec.recency = RecencyMode::Linear;
    w = model_weights(pool, spec);
    CHECK(w[2] == doctest::Approx(0.5));
}

TEST_CASE("model_weights: verified status maps to the configured weight pair") {
    std::vector<CfPoolItem> pool{item(Alignment::RepAligned, 1.0, 0.0, true),
                                 item(Alignment::DemAligned, 1.0, 0.0, false)};
    CounterfactualModelSpec spec;
    spec.metric = CfMetric::ChannelVerified;
    spec.verified_weight = 0.9;
    const auto w = model_weights(pool, spec);
    CHECK(w[0] == doctest::Approx(0.9));
    CHECK(w[1] == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("model_weights: combined metric weights members by first-PC loadings") {
    Rng rng(67);
    std::vector<CfPoolItem> pool;
    for (int i = 0; i < 50; ++i) {
        auto it = item(static_cast<Alignment>(rng.below(3)), rng.uniform() * 100.0);
        it.plays = it.likes * 10.0 + rng.uniform();
        it.shares = it.likes * 0.5 + rng.uniform();
        it.comments = it.likes * 0.2 + rng.uniform();
        pool.push_back(it);
    }
    CounterfactualModelSpec spec;
    spec.metric = CfMetric::CombinedLSPC;
    const auto w = model_weights(pool, spec);
    REQUIRE(w.size() == pool.size());
    for (double x : w) {
        CHECK(x >= 0.0);
        CHECK(x <= 1.0 + 1e-9);
    }
}

TEST_CASE("counterfactual_skew expected value on a planted pool") {
    // likes minmax to {1, 0, 0.5}: closed-form skew = (1 - 0) / 1.5
    std::vector<CfPoolItem> pool{item(Alignment::RepAligned, 10.0),
                                 item(Alignment::DemAligned, 0.0),
                                 item(Alignment::Neutral, 5.0)};
    CounterfactualModelSpec spec;
    spec.metric = CfMetric::Likes;
    spec.reps = 300;
    Rng rng(68);
    const auto est = counterfactual_skew(pool, spec, 200, rng);
    CHECK(std::fabs(est.mean - (1.0 - 0.0) / 1.5) <= 3.0 * est.std_error);
}

TEST_CASE("errors: empty pool and all-zero weights") {
    CounterfactualModelSpec spec;
    Rng rng(69);
    CHECK_THROWS_AS(counterfactual_skew({}, spec, 10, rng), EmptyPool);

    const std::vector<double> zeros{0.0, 0.0};
    const std::vector<Alignment> aligns{Alignment::RepAligned, Alignment::DemAligned};
    CHECK_THROWS_AS(weighted_skew_sample(zeros, aligns, 10, 10, rng), AllZeroWeights);
    CHECK_THROWS_AS(closed_form_weighted_skew(zeros, aligns), AllZeroWeights);
}

TEST_CASE("spec validation bounds") {
    CounterfactualModelSpec spec;
    spec.verified_weight = 0.4;
    CHECK_THROWS_AS(spec.validate(), InvalidSpec);
    spec.verified_weight = 0.9;
    spec.reps = 0;
    CHECK_THROWS_AS(spec.validate(), InvalidSpec);
}
