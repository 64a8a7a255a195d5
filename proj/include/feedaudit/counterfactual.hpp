#pragma once

#include <span>
#include <vector>

#include "feedaudit/core.hpp"
#include "feedaudit/rng.hpp"

namespace feedaudit {

struct AllZeroWeights : DataError {
    using DataError::DataError;
};

enum class CfMetric : std::uint8_t {
    Likes,
    LikesPerRec,
    Comments,
    CommentsPerRec,
    Plays,
    Shares,
    EngagementRate,
    VideoLength,
    ChannelFollowers,
    ChannelCumulLikes,
    ChannelVideoCount,
    ChannelVerified,
    CopartisanCommentProp,
    OpposingCommentProp,
    CombinedVideo,
    CombinedChannel,
    CombinedAll,
    CombinedLSPC,
};
inline constexpr int kNumCfMetrics = 18;

enum class RecencyMode : std::uint8_t { None, Linear, Exponential };

std::string to_string(CfMetric m);
std::string to_string(RecencyMode m);
CfMetric cf_metric_from_string(const std::string& s);
RecencyMode recency_mode_from_string(const std::string& s);

struct CounterfactualModelSpec {
    CfMetric metric = CfMetric::Likes;
    RecencyMode recency = RecencyMode::None;
    double verified_weight = 0.9;  // unverified channels get 1 - verified_weight
    int reps = 100;
    double lambda = 0.6931471805599453;  // exp decay per week, ln 2 default

    void validate() const;
};

// None: weight unchanged. Linear: weight / (1 + age). Exponential:
// weight * exp(-lambda * age).
double recency_scale(double weight, double age_weeks, RecencyMode mode, double lambda);

// One pool entry with everything the 18 models can weight by.
struct CfPoolItem {
    Alignment alignment = Alignment::Neutral;
    double age_weeks = 0.0;
    double likes = 0.0;
    double likes_per_rec = 0.0;
    double comments = 0.0;
    double comments_per_rec = 0.0;
    double plays = 0.0;
    double shares = 0.0;
    double engagement_rate = 0.0;
    double video_length = 0.0;
    double followers = 0.0;
    double channel_cumul_likes = 0.0;
    double channel_video_count = 0.0;
    bool verified = false;
    double copartisan_prop = 0.0;
    double opposing_prop = 0.0;

    static CfPoolItem from_records(const VideoRecord& video, const ChannelRecord& channel,
                                   Alignment labeled_alignment, std::int64_t current_week);
};

// Sampling weights for a model: metric -> min-max normalization (verified
// status maps to verified_weight / 1 - verified_weight instead) -> recency
// scaling; combined metrics weight their min-max normalized members by the
// first-principal-component loadings.
std::vector<double> model_weights(std::span<const CfPoolItem> pool,
                                  const CounterfactualModelSpec& spec);

// Walker alias table for O(1) weighted draws with replacement.
class AliasTable {
public:
    explicit AliasTable(std::span<const double> weights);
    std::size_t sample(Rng& rng) const;
    std::size_t size() const { return prob_.size(); }

private:
    std::vector<double> prob_;
    std::vector<std::size_t> alias_;
};

struct SkewEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    int reps = 0;
    std::int64_t draws_per_rep = 0;
};

// Bootstrapped skew: reps resamples of n videos drawn with replacement with
// probability proportional to the weights; per-rep skew is the Rep-aligned
// share minus the Dem-aligned share of the draw.
SkewEstimate weighted_skew_sample(std::span<const double> weights,
                                  std::span<const Alignment> alignments, std::int64_t n, int reps,
                                  Rng& rng);

// Exact expectation of the per-draw skew: sum(w_rep)/sum(w) - sum(w_dem)/sum(w).
double closed_form_weighted_skew(std::span<const double> weights,
                                 std::span<const Alignment> alignments);

// Full null model: weights from the model spec, then the bootstrap above.
SkewEstimate counterfactual_skew(std::span<const CfPoolItem> pool,
                                 const CounterfactualModelSpec& spec, std::int64_t n, Rng& rng);

}  // namespace feedaudit
