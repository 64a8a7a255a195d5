#pragma once

#include <map>
#include <span>
#include <vector>

#include "feedaudit/stats.hpp"

namespace feedaudit {

struct NoPoliticalContent : DataError {
    using DataError::DataError;
};
struct NoPartisanWatches : DataError {
    using DataError::DataError;
};

struct LabeledWatch {
    Alignment alignment = Alignment::Neutral;
    bool is_political = false;
};

// (Rep-aligned - Dem-aligned) / political count, in [-1, 1]; politically
// neutral videos count only in the denominator.
double ideological_content(std::span<const LabeledWatch> watched);

struct WeeklyScore {
    std::int64_t week = 0;
    double score = 0.0;
};

// Per-condition OLS of the weekly mean score on the week index.
std::map<std::string, TrendFit> condition_trends(
    const std::map<std::string, std::vector<WeeklyScore>>& weekly_by_condition);

struct ChannelWatch {
    Leaning watcher = Leaning::NeutralControl;
    Alignment channel_alignment = Alignment::Neutral;
};

// Opposite-leaning watches / (same + opposite); control-bot watches are
// excluded because a control has no opposite party.
double mismatch_proportion(std::span<const ChannelWatch> watches);

struct StanceShares {
    // share of each non-neutral stance among a bot group's political watches
    std::map<StanceLabel, double> shares;
    std::int64_t political_watches = 0;
};

struct PartisanshipSubsetRow {
    std::string subset;  // "positive" or "negative"
    bool defined = false;
    double skew = 0.0;
    std::string note;  // "insufficient data" when undefined
};

struct PartisanshipSplitReport {
    std::map<Leaning, StanceShares> stance_shares;  // Democrat / Republican groups
    std::vector<PartisanshipSubsetRow> subset_skews;
};

struct StancedWatch {
    Leaning watcher = Leaning::NeutralControl;
    StanceLabel stance = StanceLabel::Neutral;
};

// Stance shares per partisan bot group plus the skew recomputed on the
// positive-partisan (Pro-*) and negative-partisan (Anti-*) subsets.
PartisanshipSplitReport partisanship_split_report(std::span<const StancedWatch> watches);

struct TopicRow {
    std::string topic;
    double dem_share = 0.0;  // share of Dem-aligned videos carrying the topic
    double rep_share = 0.0;
    double difference = 0.0;  // rep_share - dem_share
    double chi2 = 0.0;
    double p = 1.0;
    std::int64_t video_count = 0;
};

struct TopicVideo {
    Alignment alignment = Alignment::Neutral;
    std::vector<std::string> topics;
};

// Per-topic Dem/Rep coverage with a 2x2 chi-squared on (topic vs not) x
// (Dem vs Rep); topics below min_count drop out. Sorted by difference.
std::vector<TopicRow> topic_partisan_table(std::span<const TopicVideo> videos,
                                           std::int64_t min_count = 100);

}  // namespace feedaudit
