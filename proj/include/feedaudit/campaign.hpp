#pragma once

#include <vector>

#include "feedaudit/recommender.hpp"

namespace feedaudit {

struct InsufficientChannels : DataError {
    using DataError::DataError;
};

struct ConditionReplicates {
    ExperimentCondition condition;
    int replicates = 0;
};

struct FailureModel {
    double probability = 0.0;           // per-run chance of truncation
    double bot_detection_share = 0.7;   // remainder is network failure
};

struct CampaignSpec {
    std::int64_t weeks = 27;
    int bots_per_week = 21;
    std::vector<ConditionReplicates> conditions;  // empty -> default layout
    int conditioning_channels_per_run = 8;
    int videos_per_channel = 50;
    int rec_batch_size = 10;
    std::int64_t rec_cap = 1200;
    // Fig-1-style protocol: one day of conditioning, six days of hourly
    // batches. The cap binds before the window at the defaults; both knobs
    // stay configurable.
    std::int64_t rec_window_hours = 144;
    FailureModel failure_model;
    std::int64_t min_pair_length = 150;
    std::int64_t conditioning_cap = 400;

    static std::vector<ConditionReplicates> default_conditions();
    void validate() const;
};

struct RunSpec {
    std::string run_id;
    std::int64_t week = 0;
    int bot_index = 0;
    ExperimentCondition condition;
    std::uint64_t seed = 0;
};

// weeks x bots_per_week run specs; per-run seeds derive from
// mix_seed(master_seed, week, bot_index).
std::vector<RunSpec> schedule_cohorts(const CampaignSpec& spec, std::uint64_t master_seed);

// Watches up to videos_per_channel most recent videos from
// conditioning_channels_per_run randomly selected party-aligned channels,
// newest first, 60 virtual seconds per watch. Control runs refuse.
std::vector<WatchEvent> run_conditioning(const RunSpec& run, const CampaignSpec& spec,
                                         const World& world, BotState& bot, Rng& rng);

// Hourly batches of rec_batch_size watches (10 virtual seconds each, clock
// jumping to the next whole hour) until the cap or the window ends; the
// failure model may truncate at a uniformly chosen batch boundary.
struct RecommendationLog {
    std::vector<WatchEvent> events;
    RunStatus status = RunStatus::Completed;
};
RecommendationLog run_recommendation(const RunSpec& run, const CampaignSpec& spec,
                                     const Recommender& recommender, BotState& bot, Rng& rng,
                                     std::int64_t start_ordinal_time_s);

// Full run: conditioning (skipped for controls) then recommendation.
ExperimentRun execute_run(const RunSpec& run, const CampaignSpec& spec, const World& world,
                          const Recommender& recommender);

struct MatchedPair {
    std::string dem_run;
    std::string rep_run;
    std::int64_t week = 0;
    State state = State::Georgia;
    std::int64_t n = 0;  // shared truncated length
};

struct PairExclusion {
    std::string dem_run;
    std::string rep_run;
    std::int64_t week = 0;
    State state = State::Georgia;
    std::int64_t n = 0;
    std::string reason;
};

struct PairMatchResult {
    std::vector<MatchedPair> pairs;
    std::vector<PairExclusion> excluded;
    std::vector<std::string> unpaired;  // leftover run ids
};

// Greedy pairing of Dem with Rep runs in descending recommendation-log
// length; each pair truncates to the shorter log and pairs under
// min_pair_length are excluded. Caller groups runs by (week, state).
PairMatchResult pair_match(const std::vector<const ExperimentRun*>& runs,
                           std::int64_t min_pair_length);

}  // namespace feedaudit
