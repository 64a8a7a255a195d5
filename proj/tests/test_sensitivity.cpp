#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "feedaudit/sensitivity.hpp"
#include "feedaudit/stats.hpp"

using namespace feedaudit;

namespace {

// balanced pool with some neutral mass
std::vector<Alignment> make_pool(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Alignment> pool(n);
    for (auto& a : pool) {
        const auto u = rng.uniform();
        a = u < 0.35 ? Alignment::RepAligned : (u < 0.7 ? Alignment::DemAligned : Alignment::Neutral);
    }
    return pool;
}

const std::vector<std::pair<std::string, DistSpec>> kFamilies{
    {"Binomial", {DistFamily::Binomial, 20.0, 0.25}},
    {"Lognormal", {DistFamily::Lognormal, 5.0, 0.5}},
    {"Normal", {DistFamily::Normal, 5.0, 1.0}},
    {"Poisson", {DistFamily::Poisson, 5.0, 0.0}},
};

}  // namespace

TEST_CASE("s(delta) is non-decreasing over a delta grid for every family") {
    const auto pool = make_pool(800, 71);
    for (const auto& [name, base] : kFamilies) {
        SensitivitySpec spec;
        spec.base = base;
        spec.mc_trials = 60;
        Rng rng(72);
        const SensitivityEvaluator eval(pool, spec, rng);
        double last = -2.0;
        for (double delta : {-1.0, -0.5, -0.2, 0.0, 0.2, 0.5, 1.0, 2.0, 4.0}) {
            if (delta < eval.lower_delta_bound() || delta > eval.upper_delta_bound()) continue;
            const double s = eval.expected_skew(delta);
            INFO(name << " delta=" << delta);
            CHECK(s >= last - 1e-12);
            last = s;
        }
    }
}

TEST_CASE("self-consistency: target = s(gap) recovers k = 1") {
    const auto pool = make_pool(1000, 73);
    for (const auto& [name, base] : kFamilies) {
        const double gap = 0.4;
        SensitivitySpec probe;
        probe.base = base;
        probe.mc_trials = 120;
        Rng probe_rng(74);
        const SensitivityEvaluator eval(pool, probe, probe_rng);
        const double target = eval.expected_skew(gap);

        SensitivitySpec spec = probe;
        spec.target_skew = target;
        spec.search_tolerance = 5e-4;
        Rng rng(74);  // same CRN stream as the probe
        const auto result = sensitivity_required_scaling(pool, spec, gap, rng);
        INFO(name);
        CHECK(result.k == doctest::Approx(1.0).epsilon(0.02));
    }
}

TEST_CASE("planted 3x gap is recovered within 10% for every family") {
    const auto pool = make_pool(2000, 75);
    const double delta_ref = 0.25;
    for (const auto& [name, base] : kFamilies) {
        // plant: the latent metric really differs by 3 * delta_ref
        SensitivitySpec probe;
        probe.base = base;
        probe.mc_trials = 200;
        Rng probe_rng(76);
        const SensitivityEvaluator eval(pool, probe, probe_rng);
        const double observed_skew = eval.expected_skew(3.0 * delta_ref);

        SensitivitySpec spec = probe;
        spec.target_skew = observed_skew;
        spec.search_tolerance = 5e-4;
        Rng rng(77);  // fresh CRN draws, independent of the plant
        const auto result = sensitivity_required_scaling(pool, spec, delta_ref, rng);
        INFO(name);
        CHECK(result.k == doctest::Approx(3.0).epsilon(0.10));
        CHECK(std::fabs(result.skew_at_delta - observed_skew) < spec.search_tolerance);
    }
}

TEST_CASE("negative targets carry the sign through k") {
    const auto pool = make_pool(1200, 78);
    SensitivitySpec spec;
    spec.base = {DistFamily::Normal, 5.0, 1.0};
    spec.mc_trials = 100;
    Rng probe_rng(79);
    const SensitivityEvaluator eval(pool, spec, probe_rng);
    spec.target_skew = eval.expected_skew(-0.6);
    spec.search_tolerance = 5e-4;
    Rng rng(79);
    const auto result = sensitivity_required_scaling(pool, spec, 0.3, rng);
    CHECK(result.delta_star < 0.0);
    CHECK(result.k == doctest::Approx(-2.0).epsilon(0.05));
}

TEST_CASE("unreachable targets are reported for bounded families") {
    // binomial family: delta cannot exceed (1-p) * n
    auto pool = make_pool(400, 80);
    SensitivitySpec spec;
    spec.base = {DistFamily::Binomial, 10.0, 0.5};
    spec.target_skew = 0.99;  // beyond what any shift can produce on this pool
    spec.mc_trials = 50;
    Rng rng(81);
    CHECK_THROWS_AS(sensitivity_required_scaling(pool, spec, 0.1, rng), Unreachable);
}

TEST_CASE("input validation") {
    const auto pool = make_pool(100, 82);
    SensitivitySpec spec;
    spec.base = {DistFamily::Normal, 5.0, 1.0};
    Rng rng(83);
    CHECK_THROWS_AS(sensitivity_required_scaling(pool, spec, 0.0, rng), InvalidSpec);

    const std::vector<Alignment> one_sided(50, Alignment::RepAligned);
    CHECK_THROWS_AS(SensitivityEvaluator(one_sided, spec, rng), DegenerateSample);

    spec.mc_trials = 0;
    CHECK_THROWS_AS(SensitivityEvaluator(pool, spec, rng), InvalidSpec);
}
