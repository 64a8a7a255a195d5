#include "feedaudit/analysis.hpp"

#include <algorithm>

namespace feedaudit {

double ideological_content(std::span<const LabeledWatch> watched) {
    std::int64_t political = 0, rep = 0, dem = 0;
    for (const auto& w : watched) {
        if (!w.is_political) continue;
        ++political;
        if (w.alignment == Alignment::RepAligned) ++rep;
        if (w.alignment == Alignment::DemAligned) ++dem;
    }
    if (political == 0) throw NoPoliticalContent("no political videos among the watches");
    return static_cast<double>(rep - dem) / static_cast<double>(political);
}

std::map<std::string, TrendFit> condition_trends(
    const std::map<std::string, std::vector<WeeklyScore>>& weekly_by_condition) {
    std::map<std::string, TrendFit> out;
    for (const auto& [condition, scores] : weekly_by_condition) {
        std::vector<double> x, y;
        x.reserve(scores.size());
        y.reserve(scores.size());
        for (const auto& s : scores) {
            x.push_back(static_cast<double>(s.week));
            y.push_back(s.score);
        }
        out.emplace(condition, ols_trend(x, y));
    }
    return out;
}

double mismatch_proportion(std::span<const ChannelWatch> watches) {
    std::int64_t same = 0, opposite = 0;
    for (const auto& w : watches) {
        if (w.watcher == Leaning::NeutralControl) continue;
        if (w.channel_alignment == Alignment::Neutral) continue;
        const bool watcher_dem = w.watcher == Leaning::Democrat;
        const bool channel_dem = w.channel_alignment == Alignment::DemAligned;
        if (watcher_dem == channel_dem)
            ++same;
        else
            ++opposite;
    }
    if (same + opposite == 0)
        throw NoPartisanWatches("no partisan-conditioned watches of aligned channels");
    return static_cast<double>(opposite) / static_cast<double>(same + opposite);
}

PartisanshipSplitReport partisanship_split_report(std::span<const StancedWatch> watches) {
    PartisanshipSplitReport report;

    for (Leaning group : {Leaning::Democrat, Leaning::Republican}) {
        StanceShares shares;
        std::map<StanceLabel, std::int64_t> counts;
        for (const auto& w : watches) {
            if (w.watcher != group) continue;
            ++shares.political_watches;
            if (w.stance != StanceLabel::Neutral) ++counts[w.stance];
        }
        for (StanceLabel s : {StanceLabel::ProDemocrat, StanceLabel::AntiDemocrat,
                              StanceLabel::ProRepublican, StanceLabel::AntiRepublican}) {
            shares.shares[s] = shares.political_watches > 0
                                   ? static_cast<double>(counts[s]) /
                                         static_cast<double>(shares.political_watches)
                                   : 0.0;
        }
        report.stance_shares.emplace(group, std::move(shares));
    }
    if (report.stance_shares[Leaning::Democrat].political_watches == 0 ||
        report.stance_shares[Leaning::Republican].political_watches == 0)
        throw NoPartisanWatches("both partisan bot groups need labeled watches");

    // skew restricted to the positive-partisan and negative-partisan subsets
    const auto subset_skew = [&](bool positive) -> PartisanshipSubsetRow {
        PartisanshipSubsetRow row;
        row.subset = positive ? "positive" : "negative";
        std::vector<LabeledWatch> subset;
        for (const auto& w : watches) {
            const bool is_positive =
                w.stance == StanceLabel::ProDemocrat || w.stance == StanceLabel::ProRepublican;
            const bool is_negative =
                w.stance == StanceLabel::AntiDemocrat || w.stance == StanceLabel::AntiRepublican;
            if ((positive && is_positive) || (!positive && is_negative))
                subset.push_back({alignment_of(w.stance), true});
        }
        try {
            row.skew = ideological_content(subset);
            row.defined = true;
        } catch (const NoPoliticalContent&) {
            row.note = "insufficient data";
        }
        return row;
    };
    report.subset_skews.push_back(subset_skew(true));
    report.subset_skews.push_back(subset_skew(false));
    return report;
}

std::vector<TopicRow> topic_partisan_table(std::span<const TopicVideo> videos,
                                           std::int64_t min_count) {
    std::int64_t dem_total = 0, rep_total = 0;
    std::map<std::string, std::pair<std::int64_t, std::int64_t>> per_topic;  // dem, rep
    std::map<std::string, std::int64_t> topic_videos;
    for (const auto& v : videos) {
        if (v.alignment == Alignment::DemAligned)
            ++dem_total;
        else if (v.alignment == Alignment::RepAligned)
            ++rep_total;
        for (const auto& t : v.topics) {
            ++topic_videos[t];
            if (v.alignment == Alignment::DemAligned) ++per_topic[t].first;
            if (v.alignment == Alignment::RepAligned) ++per_topic[t].second;
        }
    }

    std::vector<TopicRow> rows;
    if (dem_total == 0 || rep_total == 0) return rows;
    for (const auto& [topic, counts] : per_topic) {
        if (topic_videos[topic] < min_count) continue;
        TopicRow row;
        row.topic = topic;
        row.video_count = topic_videos[topic];
        row.dem_share = static_cast<double>(counts.first) / static_cast<double>(dem_total);
        row.rep_share = static_cast<double>(counts.second) / static_cast<double>(rep_total);
        row.difference = row.rep_share - row.dem_share;
        const double d_on = static_cast<double>(counts.first);
        const double r_on = static_cast<double>(counts.second);
        const double d_off = static_cast<double>(dem_total) - d_on;
        const double r_off = static_cast<double>(rep_total) - r_on;
        try {
            const auto chi = chi_squared_test({{d_on, d_off}, {r_on, r_off}});
            row.chi2 = chi.chi2;
            row.p = chi.p;
        } catch (const ZeroExpectedCell&) {
            row.chi2 = 0.0;
            row.p = 1.0;
        }
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const TopicRow& a, const TopicRow& b) {
        if (a.difference != b.difference) return a.difference > b.difference;
        return a.topic < b.topic;
    });
    return rows;
}

}  // namespace feedaudit
