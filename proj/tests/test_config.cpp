#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "feedaudit/config.hpp"

using namespace feedaudit;

namespace {

std::string minimal_config() {
    return R"([pool]
seed = 11

[campaign]
master_seed = 22

[analysis]
seed = 33
)";
}

}  // namespace

TEST_CASE("the shipped default config parses and validates") {
    const auto cfg = config_from_ini(IniFile::parse(default_config_text()));
    CHECK(cfg.campaign.weeks == 27);
    CHECK(cfg.campaign.bots_per_week == 21);
    CHECK(cfg.recommender.copartisan_boost_rep > cfg.recommender.copartisan_boost_dem);
    CHECK(cfg.analysis.resolved_models().size() == kNumCfMetrics * 3);
}

TEST_CASE("minimal config fills documented defaults") {
    const auto cfg = config_from_ini(IniFile::parse(minimal_config()));
    CHECK(cfg.pool.seed == 11);
    CHECK(cfg.master_seed == 22);
    CHECK(cfg.analysis.seed == 33);
    CHECK(cfg.campaign.rec_cap == 1200);
    CHECK(cfg.campaign.min_pair_length == 150);
    CHECK(cfg.campaign.conditioning_cap == 400);
    CHECK(cfg.campaign.rec_batch_size == 10);
    CHECK(cfg.output_dir == "out");
}

TEST_CASE("every seed must be explicit") {
    CHECK_THROWS_AS(config_from_ini(IniFile::parse("[pool]\nn_videos = 10\n[campaign]\n"
                                                   "master_seed = 1\n[analysis]\nseed = 2\n")),
                    ConfigError);
    CHECK_THROWS_AS(config_from_ini(IniFile::parse("[pool]\nseed = 1\n[campaign]\n"
                                                   "weeks = 2\n[analysis]\nseed = 2\n")),
                    ConfigError);
    CHECK_THROWS_AS(
        config_from_ini(IniFile::parse("[pool]\nseed = 1\n[campaign]\nmaster_seed = 2\n")),
        ConfigError);
}

TEST_CASE("unknown sections and keys are errors") {
    CHECK_THROWS_AS(config_from_ini(IniFile::parse(minimal_config() + "[mystery]\nx = 1\n")),
                    ConfigError);
    CHECK_THROWS_AS(config_from_ini(IniFile::parse(minimal_config() + "[output]\ndirectory = x\n")),
                    ConfigError);
    CHECK_THROWS_AS(
        config_from_ini(IniFile::parse("[pool]\nseed = 1\nn_video = 5\n[campaign]\n"
                                       "master_seed = 2\n[analysis]\nseed = 3\n")),
        ConfigError);
}

TEST_CASE("duplicate keys are errors; repeated topic keys are allowed") {
    CHECK_THROWS_AS(IniFile::parse("[pool]\nseed = 1\nseed = 2\n"), ConfigError);
    const auto ini = IniFile::parse(
        "[pool]\nseed = 1\ntopic = climate 2 1 1 2 1\ntopic = crime 1 2 2 1 1\n"
        "[campaign]\nmaster_seed = 2\n[analysis]\nseed = 3\n");
    const auto cfg = config_from_ini(ini);
    REQUIRE(cfg.pool.topic_catalog.size() == 2);
    CHECK(cfg.pool.topic_catalog[0].topic_id == "climate");
    CHECK(cfg.pool.topic_catalog[1].stance_weights[1] == 2.0);
}

TEST_CASE("malformed lines are reported with positions") {
    CHECK_THROWS_WITH_AS(IniFile::parse("[pool\nseed = 1\n"),
                         doctest::Contains("unterminated section"), ConfigError);
    CHECK_THROWS_WITH_AS(IniFile::parse("key = 1\n"), doctest::Contains("outside any section"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(IniFile::parse("[pool]\njust a line\n"),
                         doctest::Contains("expected key = value"), ConfigError);
}

TEST_CASE("stance mix and conditions parse from their compact forms") {
    const auto cfg = config_from_ini(IniFile::parse(R"([pool]
seed = 5
stance_mix = 0.1 0.2 0.3 0.2 0.2

[campaign]
master_seed = 6
bots_per_week = 4
conditions = NewYork:Democrat:2, Texas:Republican:1, Georgia:NeutralControl:1

[analysis]
seed = 7
models = Likes:None, CombinedAll:Exponential
)"));
    CHECK(cfg.pool.stance_mix[2] == 0.3);
    REQUIRE(cfg.campaign.conditions.size() == 3);
    CHECK(cfg.campaign.conditions[0].replicates == 2);
    CHECK(cfg.campaign.conditions[1].condition.state == State::Texas);
    REQUIRE(cfg.analysis.models.size() == 2);
    CHECK(cfg.analysis.models[1].metric == CfMetric::CombinedAll);
    CHECK(cfg.analysis.models[1].recency == RecencyMode::Exponential);
}

TEST_CASE("distribution overrides parse as family p1 p2") {
    const auto cfg = config_from_ini(IniFile::parse(
        "[pool]\nseed = 1\nplays = poisson 250\nlikes = normal 40 12\n"
        "[campaign]\nmaster_seed = 2\n[analysis]\nseed = 3\n"));
    CHECK(cfg.pool.engagement_dists.at("plays").family == DistFamily::Poisson);
    CHECK(cfg.pool.engagement_dists.at("plays").p1 == 250.0);
    CHECK(cfg.pool.engagement_dists.at("likes").family == DistFamily::Normal);
    CHECK(cfg.pool.engagement_dists.at("likes").p2 == 12.0);
    CHECK_THROWS_AS(
        config_from_ini(IniFile::parse("[pool]\nseed = 1\nplays = cauchy 1 1\n"
                                       "[campaign]\nmaster_seed = 2\n[analysis]\nseed = 3\n")),
        ConfigError);
}

TEST_CASE("validation failures surface as config errors") {
    CHECK_THROWS_AS(
        config_from_ini(IniFile::parse("[pool]\nseed = 1\nstance_mix = 0.5 0.5 0.5 0.5 0.5\n"
                                       "[campaign]\nmaster_seed = 2\n[analysis]\nseed = 3\n")),
        InvalidSpec);
    CHECK_THROWS_AS(
        config_from_ini(IniFile::parse("[pool]\nseed = 1\n[campaign]\nmaster_seed = 2\n"
                                       "bots_per_week = 5\n[analysis]\nseed = 3\n")),
        InvalidSpec);
}
