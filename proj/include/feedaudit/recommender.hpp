#pragma once

#include <vector>

#include "feedaudit/pool.hpp"

namespace feedaudit {

struct RecommenderParams {
    double copartisan_boost_dem = 1.0;
    double copartisan_boost_rep = 1.0;
    double crosspartisan_rate_dem = 1.0;
    double crosspartisan_rate_rep = 1.0;
    double engagement_exponent = 0.0;
    double polarization_drift_per_week = 0.0;
    int history_window = 25;

    void validate() const;
};

// Watch history ring plus an exponentially-weighted lean in [-1, 1]
// (decay 0.95 per watch, newest first; -1 Dem, +1 Rep, 0 Neutral).
class BotState {
public:
    explicit BotState(int history_window = 25);

    void observe(Alignment alignment);
    double inferred_lean() const { return lean_; }
    std::size_t watches() const { return total_; }

private:
    std::vector<int> ring_;  // -1, 0, +1
    std::size_t head_ = 0;
    std::size_t filled_ = 0;
    std::size_t total_ = 0;
    double lean_ = 0.0;
};

// Samples videos with weight
//   w(v) = engagement(v)^exponent * boost(class(v), bot, week)
// where engagement(v) = plays + 1 and boost applies the co-partisan
// multiplier to the side matching the bot's lean sign and the cross-partisan
// multiplier to the other side, both scaled by (1 + drift * week). Bias is
// multiplicative, so expected class proportions have a closed form.
class Recommender {
public:
    Recommender(const World& world, RecommenderParams params);

    // samples one video, records the watch in the bot's history
    const VideoRecord& recommend_next(BotState& bot, std::int64_t week, Rng& rng) const;

    // expected class shares (dem, rep, other) for a given lean sign and week;
    // exposed for the closed-form oracles
    std::array<double, 3> expected_class_shares(double lean, std::int64_t week) const;

private:
    std::array<double, 3> class_multipliers(double lean, std::int64_t week) const;

    const World* world_;
    RecommenderParams params_;
    // class 0 = Dem-aligned, 1 = Rep-aligned, 2 = everything else
    std::array<std::vector<std::size_t>, 3> class_videos_;
    std::array<std::vector<double>, 3> class_cumulative_;
    std::array<double, 3> class_total_{};
};

}  // namespace feedaudit
