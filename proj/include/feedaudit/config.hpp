#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "feedaudit/campaign.hpp"
#include "feedaudit/counterfactual.hpp"
#include "feedaudit/pool.hpp"

namespace feedaudit {

// Flat INI-style key=value sections. Strict: unknown sections, unknown keys,
// duplicate keys (other than the repeatable `topic`) and missing seeds are
// all configuration errors.
struct IniFile {
    // section -> ordered (key, value) pairs
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections;

    static IniFile parse(const std::string& text);
    static IniFile load(const std::filesystem::path& path);
};

struct AnalysisOptions {
    std::uint64_t seed = 0;
    int reps = 100;
    // empty -> every metric x every recency mode
    std::vector<CounterfactualModelSpec> models;
    double recency_lambda = 0.6931471805599453;
    double verified_weight = 0.9;
    std::int64_t min_topic_count = 100;
    double label_noise = 0.02;
    int n_raters = 3;
    std::vector<double> misinfo_thresholds{0.6, 0.7, 0.8, 0.9};
    double ridge = 0.0;
    std::int64_t min_channel_watches = 10;
    std::size_t rolling_window = 100;
    std::string misinfo_corpus;       // optional TSV path
    std::string misinfo_transcripts;  // optional JSONL path

    std::vector<CounterfactualModelSpec> resolved_models() const;
};

struct CampaignConfig {
    ContentPoolSpec pool;
    RecommenderParams recommender;
    CampaignSpec campaign;
    std::uint64_t master_seed = 0;
    AnalysisOptions analysis;
    std::string output_dir = "out";
};

CampaignConfig config_from_ini(const IniFile& ini);
CampaignConfig load_campaign_config(const std::filesystem::path& path);

// A ready-to-edit config with every required seed filled in.
std::string default_config_text();

}  // namespace feedaudit
