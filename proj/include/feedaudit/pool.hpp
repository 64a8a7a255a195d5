#pragma once

#include <array>
#include <map>
#include <unordered_map>
#include <vector>

#include "feedaudit/core.hpp"
#include "feedaudit/rng.hpp"

namespace feedaudit {

enum class DistFamily : std::uint8_t { Lognormal, Normal, Poisson, Binomial };

DistFamily dist_family_from_string(const std::string& s);
std::string to_string(DistFamily f);

// One engagement metric's sampling distribution.
// Lognormal(mean, sigma)  parameterized by its mean, mu = ln(mean) - sigma^2/2
// Normal(mean, sd)        draws below zero clamp to zero
// Poisson(lambda)
// Binomial(n, p)
struct DistSpec {
    DistFamily family = DistFamily::Lognormal;
    double p1 = 1.0;
    double p2 = 0.0;

    double sample(Rng& rng) const;
    double mean() const;
    // same distribution with the mean shifted by delta (sensitivity analysis)
    DistSpec with_mean_shift(double delta) const;
    // inverse-CDF draw for common-random-number designs
    double sample_icdf(double u, double z) const;
};

struct TopicSpec {
    std::string topic_id;
    // relative weight of this topic per stance (ProDem, AntiDem, ProRep, AntiRep, Neutral)
    std::array<double, kNumStances> stance_weights{1.0, 1.0, 1.0, 1.0, 1.0};
};

struct ContentPoolSpec {
    std::int64_t n_videos = 8000;
    std::int64_t n_channels = 160;
    std::array<double, kNumStances> stance_mix{0.10, 0.22, 0.08, 0.14, 0.46};
    double political_fraction = 0.30;
    std::map<std::string, DistSpec> engagement_dists;  // merged over defaults
    double verified_prob = 0.20;
    std::vector<TopicSpec> topic_catalog;
    std::uint64_t seed = 0;

    static std::map<std::string, DistSpec> default_engagement_dists();
    static std::vector<TopicSpec> default_topic_catalog();

    void validate() const;  // throws InvalidSpec
    const DistSpec& dist(const std::string& metric) const;
};

// The generated world. Channel alignment on the records stays unset (that is
// classify_channel's job downstream); the conditioning rosters below come
// from classify_channel applied to each channel's true video stances.
struct World {
    std::vector<VideoRecord> videos;
    std::vector<ChannelRecord> channels;
    std::vector<std::vector<std::size_t>> conditioning_roster;  // [leaning: Dem, Rep] -> channel idx
    std::unordered_map<std::string, std::size_t> video_index;
    std::unordered_map<std::string, std::size_t> channel_index;
    std::vector<std::vector<std::size_t>> channel_videos;  // channel idx -> video idx, newest first

    const VideoRecord& video(const std::string& id) const;
    const ChannelRecord& channel(const std::string& id) const;
    static World from_records(std::vector<VideoRecord> videos, std::vector<ChannelRecord> channels);
};

// Deterministic for a fixed spec; stance frequencies follow stance_mix and
// engagement counters follow the configured distributions with shares <=
// plays enforced by rejection.
World generate_pool(const ContentPoolSpec& spec);

}  // namespace feedaudit
