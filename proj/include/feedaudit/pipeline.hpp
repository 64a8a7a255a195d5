#pragma once

#include <filesystem>
#include <functional>
#include <set>

#include "feedaudit/analysis.hpp"
#include "feedaudit/campaign.hpp"
#include "feedaudit/config.hpp"
#include "feedaudit/counterfactual.hpp"
#include "feedaudit/logistic.hpp"
#include "feedaudit/misinfo.hpp"
#include "feedaudit/rater.hpp"

namespace feedaudit {

struct MissingArtifact : DataError {
    using DataError::DataError;
};

// Index-sharded worker pool; every index writes only its own slot, so results
// are identical for any worker count.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& work);

struct CampaignArtifacts {
    std::filesystem::path manifest_path;
    std::size_t n_runs = 0;
    std::size_t n_pairs = 0;
    std::size_t n_excluded = 0;
};

// gen pool -> schedule -> execute -> pair match -> manifest. Artifacts:
// pool.jsonl, runs/<run_id>.jsonl, manifest.json (fnv1a64 content digests,
// no timestamps, ordered by run id).
CampaignArtifacts run_campaign(const CampaignConfig& config, const std::filesystem::path& out_dir,
                               int workers);

struct AnalysisInputs {
    CampaignConfig config;
    World world;
    std::vector<ExperimentRun> runs;
    std::vector<MatchedPair> pairs;
    std::vector<PairExclusion> excluded;
};

AnalysisInputs load_inputs(const std::filesystem::path& manifest_path);

// ---------------------------------------------------------------------------
// Analysis result rows (one struct per emitted table)
// ---------------------------------------------------------------------------
struct WeeklyConditionRow {
    std::int64_t week = 0;
    ExperimentCondition condition;
    double mean = 0.0, ci_lo = 0.0, ci_hi = 0.0;
    int n_runs = 0;
};

struct ObservedSkewRow {
    std::int64_t week = 0;
    State state = State::Georgia;
    double mean_skew = 0.0;
    int n_pairs = 0;
};

struct TTestRow {
    std::string scope;
    std::string comparison;
    double t = 0.0, df = 0.0, p = 1.0;
    int n_a = 0, n_b = 0;
};

struct CounterfactualRow {
    std::string subset;  // all / positive / negative
    CfMetric metric = CfMetric::Likes;
    RecencyMode recency = RecencyMode::None;
    double expected_mean = 0.0, expected_se = 0.0;
    double observed_mean = 0.0;
    double t = 0.0, df = 0.0, p = 1.0;
    int weeks = 0;
};

struct SensitivityRow {
    std::string metric;
    std::string family;
    double normalized_gap = 0.0;
    bool ok = false;
    double k = 0.0, delta_star = 0.0;
    std::string note;
};

struct ChannelMismatchRow {
    std::string channel_id;
    std::string party;
    std::int64_t followers = 0;
    std::int64_t watches = 0;
    double mismatch = 0.0;
};

struct ChiRow {
    std::string comparison;
    double chi2 = 0.0, df = 0.0, p = 1.0;
};

struct AgreementRow {
    std::string question;
    std::string metric;
    double value = 0.0;
};

struct RollingRow {
    std::string condition;
    std::int64_t ordinal = 0;
    double value = 0.0;
};

struct AnalysisBundle {
    std::vector<WeeklyConditionRow> weekly;
    std::map<std::string, TrendFit> trends;
    std::vector<ObservedSkewRow> observed_weekly;
    double pooled_observed_skew = 0.0;
    std::map<std::string, double> pooled_observed_by_subset;
    std::map<std::string, bool> pooled_defined_by_subset;
    std::vector<TTestRow> ttests;
    std::vector<CounterfactualRow> counterfactuals;
    std::vector<SensitivityRow> sensitivity;

    bool fit_ok = false;
    std::string fit_note;
    RegressionFit mismatch_fit;
    std::vector<std::pair<std::string, double>> vif_initial;
    std::vector<std::string> vif_dropped;

    std::vector<ChannelMismatchRow> channels;
    std::vector<ChiRow> channel_tests;
    bool partisanship_ok = false;
    PartisanshipSplitReport partisanship;
    std::vector<TopicRow> topics;
    std::vector<AgreementRow> agreement;
    std::vector<RollingRow> rolling;

    bool misinfo_ok = false;
    MisinfoReport misinfo;

    std::vector<std::pair<std::string, std::string>> validation_issues;
    std::size_t included_runs = 0;
};

AnalysisBundle analyze_campaign(const AnalysisInputs& inputs, int workers);

const std::set<std::string>& all_report_sets();

void write_reports(const AnalysisBundle& bundle, const std::filesystem::path& out_dir,
                   const std::set<std::string>& report_sets);

// Load + analyze + write in one call (the `analyze` / `report` subcommands).
void emit_report(const std::filesystem::path& manifest_path, const std::set<std::string>& sets,
                 const std::filesystem::path& out_dir, int workers);

}  // namespace feedaudit
