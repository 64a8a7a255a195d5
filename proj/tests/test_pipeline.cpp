#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "feedaudit/pipeline.hpp"

using namespace feedaudit;
namespace fs = std::filesystem;

namespace {

CampaignConfig smoke_config() {
    auto cfg = config_from_ini(IniFile::parse(default_config_text()));
    cfg.campaign.weeks = 2;
    cfg.pool.n_videos = 1500;
    cfg.pool.n_channels = 60;
    cfg.analysis.reps = 20;
    cfg.analysis.models.clear();
    for (const char* m : {"Likes", "ChannelVerified", "CombinedLSPC"}) {
        CounterfactualModelSpec spec;
        spec.metric = cf_metric_from_string(m);
        spec.reps = 20;
        cfg.analysis.models.push_back(spec);
    }
    return cfg;
}

std::string read_all(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("run_campaign writes pool, logs, and a loadable manifest") {
    TempDir dir("feedaudit_pipe1");
    const auto cfg = smoke_config();
    const auto artifacts = run_campaign(cfg, dir.path, 2);
    CHECK(artifacts.n_runs == 42);  // 2 weeks x 21 bots
    CHECK(fs::exists(dir.path / "pool.jsonl"));
    CHECK(fs::exists(artifacts.manifest_path));

    const auto inputs = load_inputs(artifacts.manifest_path);
    CHECK(inputs.runs.size() == 42);
    CHECK(inputs.world.videos.size() == 1500);
    CHECK(inputs.pairs.size() == artifacts.n_pairs);
    for (const auto& pair : inputs.pairs) {
        CHECK(pair.n >= cfg.campaign.min_pair_length);
        // both logs really have at least n recommendation events
        for (const auto& id : {pair.dem_run, pair.rep_run}) {
            bool found = false;
            for (const auto& run : inputs.runs)
                if (run.run_id == id) {
                    CHECK(run.recommendation_count() >= pair.n);
                    found = true;
                }
            CHECK(found);
        }
    }
    for (const auto& ex : inputs.excluded) CHECK(ex.n < cfg.campaign.min_pair_length);
}

TEST_CASE("campaign artifacts are byte-identical across runs and worker counts") {
    TempDir dir("feedaudit_pipe2");
    const auto cfg = smoke_config();
    const auto a = run_campaign(cfg, dir.path / "a", 4);
    const auto b = run_campaign(cfg, dir.path / "b", 1);
    CHECK(read_all(a.manifest_path) == read_all(b.manifest_path));
    CHECK(read_all(dir.path / "a" / "pool.jsonl") == read_all(dir.path / "b" / "pool.jsonl"));

    emit_report(a.manifest_path, all_report_sets(), dir.path / "a" / "reports", 4);
    emit_report(b.manifest_path, all_report_sets(), dir.path / "b" / "reports", 1);
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(dir.path / "a" / "reports")) {
        const auto other = dir.path / "b" / "reports" / entry.path().filename();
        REQUIRE(fs::exists(other));
        CHECK(read_all(entry.path()) == read_all(other));
        ++compared;
    }
    CHECK(compared >= 10);
}

TEST_CASE("analysis bundle has the expected shape on a smoke campaign") {
    TempDir dir("feedaudit_pipe3");
    const auto cfg = smoke_config();
    const auto artifacts = run_campaign(cfg, dir.path, 2);
    const auto inputs = load_inputs(artifacts.manifest_path);
    const auto bundle = analyze_campaign(inputs, 2);

    CHECK(bundle.included_runs > 0);
    CHECK_FALSE(bundle.weekly.empty());
    CHECK_FALSE(bundle.counterfactuals.empty());
    // one row per (model x subset) that had data
    CHECK(bundle.counterfactuals.size() <= cfg.analysis.models.size() * 3);
    CHECK(bundle.validation_issues.empty());
    CHECK_FALSE(bundle.agreement.empty());
    // by construction of the planted config the pooled skew is a finite value
    CHECK(std::isfinite(bundle.pooled_observed_skew));
}

TEST_CASE("no pairs still produces valid empty tables") {
    TempDir dir("feedaudit_pipe4");
    auto cfg = smoke_config();
    cfg.campaign.weeks = 1;
    cfg.campaign.min_pair_length = 100000;  // nothing can qualify
    const auto artifacts = run_campaign(cfg, dir.path, 1);
    CHECK(artifacts.n_pairs == 0);
    emit_report(artifacts.manifest_path, all_report_sets(), dir.path / "reports", 1);
    const auto csv = read_all(dir.path / "reports" / "counterfactual_skews.csv");
    CHECK(csv.find("subset,metric") != std::string::npos);  // headers, no rows
}

TEST_CASE("missing artifacts are reported as MissingArtifact") {
    TempDir dir("feedaudit_pipe5");
    auto cfg = smoke_config();
    cfg.campaign.weeks = 1;
    const auto artifacts = run_campaign(cfg, dir.path, 1);
    fs::remove(dir.path / "runs" / "w00b00.jsonl");
    CHECK_THROWS_AS(load_inputs(artifacts.manifest_path), MissingArtifact);
    CHECK_THROWS_AS(load_inputs(dir.path / "nowhere.json"), MissingArtifact);
}

TEST_CASE("report set selection writes only the chosen tables") {
    TempDir dir("feedaudit_pipe6");
    auto cfg = smoke_config();
    cfg.campaign.weeks = 1;
    const auto artifacts = run_campaign(cfg, dir.path, 1);
    emit_report(artifacts.manifest_path, {"skew"}, dir.path / "reports", 1);
    CHECK(fs::exists(dir.path / "reports" / "skew_by_week.csv"));
    CHECK_FALSE(fs::exists(dir.path / "reports" / "topic_table.csv"));
    CHECK_THROWS_AS(
        emit_report(artifacts.manifest_path, {"nonsense"}, dir.path / "reports", 1), ConfigError);
}

TEST_CASE("parallel_for covers every index exactly once and propagates errors") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 8, [&](std::size_t i) { hits[i]++; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, 4,
                                 [](std::size_t i) {
                                     if (i == 7) throw DataError("boom");
                                 }),
                    DataError);
}
