#include "feedaudit/recommender.hpp"

#include <algorithm>
#include <cmath>

namespace feedaudit {

void RecommenderParams::validate() const {
    for (double m : {copartisan_boost_dem, copartisan_boost_rep, crosspartisan_rate_dem,
                     crosspartisan_rate_rep}) {
        if (!(m >= 0.0) || !std::isfinite(m))
            throw InvalidSpec("recommender multipliers must be finite and non-negative");
    }
    if (!std::isfinite(engagement_exponent)) throw InvalidSpec("engagement_exponent must be finite");
    if (!std::isfinite(polarization_drift_per_week))
        throw InvalidSpec("polarization_drift_per_week must be finite");
    if (history_window < 1) throw InvalidSpec("history_window must be >= 1");
}

BotState::BotState(int history_window) {
    if (history_window < 1) throw InvalidSpec("history_window must be >= 1");
    ring_.assign(static_cast<std::size_t>(history_window), 0);
}

void BotState::observe(Alignment alignment) {
    int v = 0;
    if (alignment == Alignment::DemAligned) v = -1;
    if (alignment == Alignment::RepAligned) v = +1;
    ring_[head_] = v;
    head_ = (head_ + 1) % ring_.size();
    filled_ = std::min(filled_ + 1, ring_.size());
    ++total_;
    // bounded exponential average, decay 0.95 per watch; neutral watches
    // shrink the magnitude without flipping the inferred side
    constexpr double kDecay = 0.95;
    lean_ = kDecay * lean_ + (1.0 - kDecay) * static_cast<double>(v);
}

Recommender::Recommender(const World& world, RecommenderParams params)
    : world_(&world), params_(params) {
    params_.validate();
    if (world.videos.empty()) throw EmptyPool("recommender needs a non-empty pool");
    for (std::size_t i = 0; i < world.videos.size(); ++i) {
        const auto& v = world.videos[i];
        std::size_t cls = 2;
        if (v.stance) {
            const Alignment a = alignment_of(*v.stance);
            if (a == Alignment::DemAligned) cls = 0;
            if (a == Alignment::RepAligned) cls = 1;
        }
        const double u =
            std::pow(static_cast<double>(v.plays) + 1.0, params_.engagement_exponent);
        class_videos_[cls].push_back(i);
        class_total_[cls] += u;
        class_cumulative_[cls].push_back(class_total_[cls]);
    }
}

std::array<double, 3> Recommender::class_multipliers(double lean, std::int64_t week) const {
    std::array<double, 3> mult{1.0, 1.0, 1.0};
    if (lean == 0.0) return mult;
    const double scale = std::max(0.0, 1.0 + params_.polarization_drift_per_week *
                                            static_cast<double>(week));
    // the lean's sign picks the multiplier pair, its magnitude interpolates
    // toward the full multiplier; a barely-inferred lean barely matters
    const double conviction = std::min(1.0, std::fabs(lean));
    auto blend = [&](double m) { return 1.0 + (m * scale - 1.0) * conviction; };
    if (lean < 0.0) {
        mult[0] = blend(params_.copartisan_boost_dem);
        mult[1] = blend(params_.crosspartisan_rate_dem);
    } else {
        mult[1] = blend(params_.copartisan_boost_rep);
        mult[0] = blend(params_.crosspartisan_rate_rep);
    }
    return mult;
}

std::array<double, 3> Recommender::expected_class_shares(double lean, std::int64_t week) const {
    const auto mult = class_multipliers(lean, week);
    std::array<double, 3> mass{};
    double total = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
        mass[c] = mult[c] * class_total_[c];
        total += mass[c];
    }
    if (total <= 0.0) throw EmptyPool("all sampling weights are zero");
    for (auto& m : mass) m /= total;
    return mass;
}

const VideoRecord& Recommender::recommend_next(BotState& bot, std::int64_t week, Rng& rng) const {
    const auto mult = class_multipliers(bot.inferred_lean(), week);
    double total = 0.0;
    std::array<double, 3> mass{};
    for (std::size_t c = 0; c < 3; ++c) {
        mass[c] = mult[c] * class_total_[c];
        total += mass[c];
    }
    if (total <= 0.0) throw EmptyPool("all sampling weights are zero");

    double u = rng.uniform() * total;
    std::size_t cls = 2;
    for (std::size_t c = 0; c < 3; ++c) {
        if (u < mass[c] || c == 2) {
            cls = c;
            break;
        }
        u -= mass[c];
    }
    while (class_videos_[cls].empty()) cls = (cls + 1) % 3;  // mass>0 guarantees a hit

    const auto& cum = class_cumulative_[cls];
    const double target = rng.uniform() * class_total_[cls];
    const auto it = std::upper_bound(cum.begin(), cum.end(), target);
    const std::size_t pos = std::min(static_cast<std::size_t>(it - cum.begin()),
                                     class_videos_[cls].size() - 1);
    const auto& video = world_->videos[class_videos_[cls][pos]];

    bot.observe(video.stance ? alignment_of(*video.stance) : Alignment::Neutral);
    return video;
}

}  // namespace feedaudit
