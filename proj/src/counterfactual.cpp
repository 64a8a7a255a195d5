#include "feedaudit/counterfactual.hpp"

#include <algorithm>
#include <cmath>

#include "feedaudit/pca.hpp"
#include "feedaudit/stats.hpp"

namespace feedaudit {

std::string to_string(CfMetric m) {
    switch (m) {
        case CfMetric::Likes: return "Likes";
        case CfMetric::LikesPerRec: return "LikesPerRec";
        case CfMetric::Comments: return "Comments";
        case CfMetric::CommentsPerRec: return "CommentsPerRec";
        case CfMetric::Plays: return "Plays";
        case CfMetric::Shares: return "Shares";
        case CfMetric::EngagementRate: return "EngagementRate";
        case CfMetric::VideoLength: return "VideoLength";
        case CfMetric::ChannelFollowers: return "ChannelFollowers";
        case CfMetric::ChannelCumulLikes: return "ChannelCumulLikes";
        case CfMetric::ChannelVideoCount: return "ChannelVideoCount";
        case CfMetric::ChannelVerified: return "ChannelVerified";
        case CfMetric::CopartisanCommentProp: return "CopartisanCommentProp";
        case CfMetric::OpposingCommentProp: return "OpposingCommentProp";
        case CfMetric::CombinedVideo: return "CombinedVideo";
        case CfMetric::CombinedChannel: return "CombinedChannel";
        case CfMetric::CombinedAll: return "CombinedAll";
        case CfMetric::CombinedLSPC: return "CombinedLSPC";
    }
    return "?";
}

std::string to_string(RecencyMode m) {
    switch (m) {
        case RecencyMode::None: return "None";
        case RecencyMode::Linear: return "Linear";
        case RecencyMode::Exponential: return "Exponential";
    }
    return "?";
}

CfMetric cf_metric_from_string(const std::string& s) {
    for (int i = 0; i < kNumCfMetrics; ++i) {
        const auto m = static_cast<CfMetric>(i);
        if (to_string(m) == s) return m;
    }
    throw ConfigError("unknown counterfactual metric: " + s);
}

RecencyMode recency_mode_from_string(const std::string& s) {
    if (s == "None") return RecencyMode::None;
    if (s == "Linear") return RecencyMode::Linear;
    if (s == "Exponential") return RecencyMode::Exponential;
    throw ConfigError("unknown recency mode: " + s);
}

void CounterfactualModelSpec::validate() const {
    if (verified_weight < 0.5 || verified_weight > 1.0)
        throw InvalidSpec("verified_weight outside [0.5, 1.0]");
    if (reps < 1) throw InvalidSpec("counterfactual reps must be >= 1");
    if (lambda < 0.0) throw InvalidSpec("recency lambda must be non-negative");
}

double recency_scale(double weight, double age_weeks, RecencyMode mode, double lambda) {
    if (weight < 0.0) throw InvalidSpec("recency_scale expects a non-negative weight");
    if (age_weeks < 0.0) throw InvalidSpec("recency_scale expects a non-negative age");
    switch (mode) {
        case RecencyMode::None: return weight;
        case RecencyMode::Linear: return weight / (1.0 + age_weeks);
        case RecencyMode::Exponential: return weight * std::exp(-lambda * age_weeks);
    }
    throw std::logic_error("recency_scale: unreachable");
}

CfPoolItem CfPoolItem::from_records(const VideoRecord& video, const ChannelRecord& channel,
                                    Alignment labeled_alignment, std::int64_t current_week) {
    CfPoolItem item;
    item.alignment = labeled_alignment;
    const double age_hours =
        static_cast<double>(current_week * 168 - video.publish_hour);
    item.age_weeks = std::max(0.0, age_hours / 168.0);
    const auto d = derived_metrics(video);
    item.likes = static_cast<double>(video.likes);
    item.likes_per_rec = d.likes_per_rec;
    item.comments = static_cast<double>(video.comments);
    item.comments_per_rec = d.comments_per_rec;
    item.plays = static_cast<double>(video.plays);
    item.shares = static_cast<double>(video.shares);
    item.engagement_rate = d.engagement_rate;
    item.video_length = video.duration_s;
    item.followers = static_cast<double>(channel.followers);
    item.channel_cumul_likes = static_cast<double>(channel.cumulative_likes);
    item.channel_video_count = static_cast<double>(channel.video_count);
    item.verified = channel.verified;
    item.copartisan_prop = video.copartisan_comment_prop;
    item.opposing_prop = video.opposing_comment_prop;
    return item;
}

namespace {

double raw_metric(const CfPoolItem& item, CfMetric m, double verified_weight) {
    switch (m) {
        case CfMetric::Likes: return item.likes;
        case CfMetric::LikesPerRec: return item.likes_per_rec;
        case CfMetric::Comments: return item.comments;
        case CfMetric::CommentsPerRec: return item.comments_per_rec;
        case CfMetric::Plays: return item.plays;
        case CfMetric::Shares: return item.shares;
        case CfMetric::EngagementRate: return item.engagement_rate;
        case CfMetric::VideoLength: return item.video_length;
        case CfMetric::ChannelFollowers: return item.followers;
        case CfMetric::ChannelCumulLikes: return item.channel_cumul_likes;
        case CfMetric::ChannelVideoCount: return item.channel_video_count;
        case CfMetric::ChannelVerified:
            return item.verified ? verified_weight : 1.0 - verified_weight;
        case CfMetric::CopartisanCommentProp: return item.copartisan_prop;
        case CfMetric::OpposingCommentProp: return item.opposing_prop;
        default: throw std::logic_error("raw_metric: combined metric has no single column");
    }
}

std::vector<CfMetric> combined_members(CfMetric m) {
    switch (m) {
        case CfMetric::CombinedVideo:
            return {CfMetric::Likes,  CfMetric::LikesPerRec,    CfMetric::Comments,
                    CfMetric::CommentsPerRec, CfMetric::Plays,  CfMetric::Shares,
                    CfMetric::EngagementRate, CfMetric::VideoLength};
        case CfMetric::CombinedChannel:
            return {CfMetric::ChannelFollowers, CfMetric::ChannelCumulLikes,
                    CfMetric::ChannelVideoCount, CfMetric::ChannelVerified};
        case CfMetric::CombinedAll: {
            auto v = combined_members(CfMetric::CombinedVideo);
            auto c = combined_members(CfMetric::CombinedChannel);
            v.insert(v.end(), c.begin(), c.end());
            return v;
        }
        case CfMetric::CombinedLSPC:
            return {CfMetric::Likes, CfMetric::Shares, CfMetric::Plays, CfMetric::Comments};
        default: return {};
    }
}

}  // namespace

std::vector<double> model_weights(std::span<const CfPoolItem> pool,
                                  const CounterfactualModelSpec& spec) {
    spec.validate();
    if (pool.empty()) throw EmptyPool("counterfactual pool is empty");
    const std::size_t n = pool.size();
    std::vector<double> weights(n, 0.0);

    const auto members = combined_members(spec.metric);
    if (members.empty()) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i)
            col[i] = raw_metric(pool[i], spec.metric, spec.verified_weight);
        // verified status is already a weight in [0,1], the rest normalize
        weights = spec.metric == CfMetric::ChannelVerified ? col : minmax_normalize(col);
    } else {
        std::vector<std::vector<double>> cols;
        cols.reserve(members.size());
        for (CfMetric m : members) {
            std::vector<double> col(n);
            for (std::size_t i = 0; i < n; ++i)
                col[i] = raw_metric(pool[i], m, spec.verified_weight);
            cols.push_back(minmax_normalize(col));
        }
        std::vector<double> loadings;
        try {
            loadings = pca_first_component_weights(cols);
        } catch (const ZeroVariance&) {
            // every member degenerate: fall back to uniform weights
            loadings.assign(members.size(), 1.0 / static_cast<double>(members.size()));
        }
        for (std::size_t i = 0; i < n; ++i) {
            double score = 0.0;
            for (std::size_t j = 0; j < cols.size(); ++j) score += loadings[j] * cols[j][i];
            // mixed-sign loadings can push a score below zero; zero weight
            // keeps the sampler well-defined
            weights[i] = std::max(0.0, score);
        }
    }

    for (std::size_t i = 0; i < n; ++i)
        weights[i] = recency_scale(weights[i], pool[i].age_weeks, spec.recency, spec.lambda);
    return weights;
}

AliasTable::AliasTable(std::span<const double> weights) {
    const std::size_t n = weights.size();
    if (n == 0) throw EmptyPool("alias table over an empty pool");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0 || !std::isfinite(w)) throw DataError("alias table weight negative or non-finite");
        total += w;
    }
    if (total <= 0.0) throw AllZeroWeights("all sampling weights are zero");

    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = weights[i] * static_cast<double>(n) / total;

    std::vector<std::size_t> small, large;
    for (std::size_t i = 0; i < n; ++i) (scaled[i] < 1.0 ? small : large).push_back(i);
    while (!small.empty() && !large.empty()) {
        const std::size_t s = small.back();
        small.pop_back();
        const std::size_t l = large.back();
        prob_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    for (std::size_t i : large) prob_[i] = 1.0;
    for (std::size_t i : small) prob_[i] = 1.0;
}

std::size_t AliasTable::sample(Rng& rng) const {
    const std::size_t i = static_cast<std::size_t>(rng.below(prob_.size()));
    return rng.uniform() < prob_[i] ? i : alias_[i];
}

SkewEstimate weighted_skew_sample(std::span<const double> weights,
                                  std::span<const Alignment> alignments, std::int64_t n, int reps,
                                  Rng& rng) {
    if (weights.size() != alignments.size())
        throw DataError("weighted_skew_sample: weight/alignment size mismatch");
    if (n < 1) throw InvalidSpec("weighted_skew_sample: draw count must be >= 1");
    if (reps < 1) throw InvalidSpec("weighted_skew_sample: reps must be >= 1");
    const AliasTable table(weights);

    std::vector<double> skews(static_cast<std::size_t>(reps));
    for (int r = 0; r < reps; ++r) {
        std::int64_t rep_count = 0, dem_count = 0;
        for (std::int64_t d = 0; d < n; ++d) {
            const Alignment a = alignments[table.sample(rng)];
            if (a == Alignment::RepAligned) ++rep_count;
            if (a == Alignment::DemAligned) ++dem_count;
        }
        skews[static_cast<std::size_t>(r)] =
            static_cast<double>(rep_count - dem_count) / static_cast<double>(n);
    }

    SkewEstimate est;
    est.reps = reps;
    est.draws_per_rep = n;
    est.mean = mean(skews);
    est.std_error = reps > 1 ? std::sqrt(sample_variance(skews) / static_cast<double>(reps)) : 0.0;
    return est;
}

double closed_form_weighted_skew(std::span<const double> weights,
                                 std::span<const Alignment> alignments) {
    if (weights.size() != alignments.size())
        throw DataError("closed_form_weighted_skew: size mismatch");
    double total = 0.0, rep = 0.0, dem = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        total += weights[i];
        if (alignments[i] == Alignment::RepAligned) rep += weights[i];
        if (alignments[i] == Alignment::DemAligned) dem += weights[i];
    }
    if (total <= 0.0) throw AllZeroWeights("all sampling weights are zero");
    return (rep - dem) / total;
}

SkewEstimate counterfactual_skew(std::span<const CfPoolItem> pool,
                                 const CounterfactualModelSpec& spec, std::int64_t n, Rng& rng) {
    if (pool.empty()) throw EmptyPool("counterfactual pool is empty");
    const auto weights = model_weights(pool, spec);
    std::vector<Alignment> alignments(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) alignments[i] = pool[i].alignment;
    return weighted_skew_sample(weights, alignments, n, spec.reps, rng);
}

}  // namespace feedaudit
