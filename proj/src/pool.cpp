#include "feedaudit/pool.hpp"

#include <algorithm>
#include <cmath>

#include "feedaudit/channels.hpp"

namespace feedaudit {

DistFamily dist_family_from_string(const std::string& s) {
    if (s == "lognormal") return DistFamily::Lognormal;
    if (s == "normal") return DistFamily::Normal;
    if (s == "poisson") return DistFamily::Poisson;
    if (s == "binomial") return DistFamily::Binomial;
    throw ConfigError("unknown distribution family: " + s);
}

std::string to_string(DistFamily f) {
    switch (f) {
        case DistFamily::Lognormal: return "lognormal";
        case DistFamily::Normal: return "normal";
        case DistFamily::Poisson: return "poisson";
        case DistFamily::Binomial: return "binomial";
    }
    return "?";
}

double DistSpec::sample(Rng& rng) const {
    switch (family) {
        case DistFamily::Lognormal: {
            if (p1 <= 0.0) throw InvalidSpec("lognormal mean must be positive");
            const double mu = std::log(p1) - 0.5 * p2 * p2;
            return rng.lognormal(mu, p2);
        }
        case DistFamily::Normal: return std::max(0.0, rng.normal(p1, p2));
        case DistFamily::Poisson: return static_cast<double>(rng.poisson(p1));
        case DistFamily::Binomial:
            return static_cast<double>(rng.binomial(static_cast<std::int64_t>(p1), p2));
    }
    throw std::logic_error("DistSpec::sample: unreachable");
}

double DistSpec::mean() const {
    switch (family) {
        case DistFamily::Lognormal: return p1;
        case DistFamily::Normal: return p1;
        case DistFamily::Poisson: return p1;
        case DistFamily::Binomial: return p1 * p2;
    }
    throw std::logic_error("DistSpec::mean: unreachable");
}

DistSpec DistSpec::with_mean_shift(double delta) const {
    DistSpec out = *this;
    switch (family) {
        case DistFamily::Lognormal:
        case DistFamily::Normal:
        case DistFamily::Poisson:
            out.p1 = p1 + delta;
            break;
        case DistFamily::Binomial:
            // mean np shifts through p with n fixed
            out.p2 = p2 + delta / p1;
            break;
    }
    return out;
}

double DistSpec::sample_icdf(double u, double z) const {
    switch (family) {
        case DistFamily::Lognormal: {
            if (p1 <= 0.0) throw InvalidSpec("lognormal mean must be positive");
            const double mu = std::log(p1) - 0.5 * p2 * p2;
            return std::exp(mu + p2 * z);
        }
        case DistFamily::Normal: return std::max(0.0, p1 + p2 * z);
        case DistFamily::Poisson:
            return p1 <= 0.0 ? 0.0 : static_cast<double>(poisson_icdf(p1, u));
        case DistFamily::Binomial: {
            const double p = std::clamp(p2, 0.0, 1.0);
            return static_cast<double>(binomial_icdf(static_cast<std::int64_t>(p1), p, u));
        }
    }
    throw std::logic_error("DistSpec::sample_icdf: unreachable");
}

std::map<std::string, DistSpec> ContentPoolSpec::default_engagement_dists() {
    return {
        {"plays", {DistFamily::Lognormal, 20000.0, 1.6}},
        {"shares", {DistFamily::Lognormal, 120.0, 1.4}},
        {"likes", {DistFamily::Lognormal, 900.0, 1.5}},
        {"comments", {DistFamily::Lognormal, 60.0, 1.3}},
        {"duration", {DistFamily::Normal, 42.0, 18.0}},
        {"followers", {DistFamily::Lognormal, 50000.0, 1.8}},
        {"channel_likes", {DistFamily::Lognormal, 400000.0, 1.9}},
        {"channel_videos", {DistFamily::Lognormal, 300.0, 1.0}},
        {"copartisan_comment_prop", {DistFamily::Normal, 0.55, 0.15}},
        {"opposing_comment_prop", {DistFamily::Normal, 0.12, 0.08}},
    };
}

std::vector<TopicSpec> ContentPoolSpec::default_topic_catalog() {
    // stance order: ProDem, AntiDem, ProRep, AntiRep, Neutral
    return {
        {"abortion_reproductive_health", {3.0, 0.6, 0.3, 3.0, 1.0}},
        {"climate_change", {2.5, 0.8, 0.4, 2.0, 1.0}},
        {"immigration", {0.5, 3.0, 2.5, 0.8, 1.0}},
        {"economy", {1.5, 2.0, 1.8, 1.5, 1.5}},
        {"crime", {0.6, 2.5, 1.8, 0.8, 1.2}},
        {"foreign_policy", {0.5, 2.2, 1.6, 0.6, 1.5}},
        {"guns", {1.2, 1.4, 1.5, 1.2, 0.8}},
        {"healthcare", {2.0, 1.0, 0.8, 1.8, 1.0}},
        {"election_process", {1.5, 2.0, 1.5, 1.5, 1.0}},
        {"education", {1.4, 1.0, 0.9, 1.2, 1.0}},
        {"energy", {1.0, 1.5, 1.6, 0.8, 1.0}},
        {"general_politics", {2.0, 2.0, 2.0, 2.0, 2.5}},
    };
}

void ContentPoolSpec::validate() const {
    if (n_videos <= 0) throw InvalidSpec("pool needs a positive number of videos");
    if (n_channels <= 0) throw InvalidSpec("pool needs a positive number of channels");
    double total = 0.0;
    for (double p : stance_mix) {
        if (p < 0.0) throw InvalidSpec("stance_mix entries must be non-negative");
        total += p;
    }
    if (std::fabs(total - 1.0) > 1e-12)
        throw InvalidSpec("stance_mix must sum to 1 (got " + std::to_string(total) + ")");
    if (political_fraction < 0.0 || political_fraction > 1.0)
        throw InvalidSpec("political_fraction outside [0,1]");
    if (verified_prob < 0.0 || verified_prob > 1.0)
        throw InvalidSpec("verified_prob outside [0,1]");
}

const DistSpec& ContentPoolSpec::dist(const std::string& metric) const {
    auto it = engagement_dists.find(metric);
    if (it == engagement_dists.end())
        throw InvalidSpec("no distribution configured for metric: " + metric);
    return it->second;
}

const VideoRecord& World::video(const std::string& id) const {
    auto it = video_index.find(id);
    if (it == video_index.end()) throw DataError("unknown video id: " + id);
    return videos[it->second];
}

const ChannelRecord& World::channel(const std::string& id) const {
    auto it = channel_index.find(id);
    if (it == channel_index.end()) throw DataError("unknown channel id: " + id);
    return channels[it->second];
}

World World::from_records(std::vector<VideoRecord> videos, std::vector<ChannelRecord> channels) {
    World w;
    w.videos = std::move(videos);
    w.channels = std::move(channels);
    w.channel_videos.assign(w.channels.size(), {});
    for (std::size_t i = 0; i < w.channels.size(); ++i)
        w.channel_index.emplace(w.channels[i].channel_id, i);
    for (std::size_t i = 0; i < w.videos.size(); ++i) {
        w.video_index.emplace(w.videos[i].video_id, i);
        auto it = w.channel_index.find(w.videos[i].channel_id);
        if (it == w.channel_index.end())
            throw DataError("video " + w.videos[i].video_id + " references unknown channel");
        w.channel_videos[it->second].push_back(i);
    }
    // newest first, video_id as the deterministic tiebreaker
    for (auto& vids : w.channel_videos)
        std::sort(vids.begin(), vids.end(), [&](std::size_t a, std::size_t b) {
            if (w.videos[a].publish_hour != w.videos[b].publish_hour)
                return w.videos[a].publish_hour > w.videos[b].publish_hour;
            return w.videos[a].video_id < w.videos[b].video_id;
        });

    // conditioning rosters from classify_channel over true stances
    w.conditioning_roster.assign(2, {});
    for (std::size_t c = 0; c < w.channels.size(); ++c) {
        std::vector<StanceLabel> stances;
        for (std::size_t vi : w.channel_videos[c])
            if (w.videos[vi].stance) stances.push_back(*w.videos[vi].stance);
        if (stances.empty()) continue;
        switch (classify_channel(stances, 1, 0.75)) {
            case ChannelClass::DemAligned: w.conditioning_roster[0].push_back(c); break;
            case ChannelClass::RepAligned: w.conditioning_roster[1].push_back(c); break;
            default: break;
        }
    }
    return w;
}

namespace {

std::string zero_pad_id(const char* prefix, std::size_t i, int width) {
    std::string digits = std::to_string(i);
    std::string out(prefix);
    for (int k = static_cast<int>(digits.size()); k < width; ++k) out += '0';
    return out + digits;
}

int pick_weighted(Rng& rng, const std::array<double, kNumStances>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = rng.uniform() * total;
    for (int i = 0; i < kNumStances; ++i) {
        u -= weights[static_cast<std::size_t>(i)];
        if (u < 0.0) return i;
    }
    return kNumStances - 1;
}

}  // namespace

World generate_pool(const ContentPoolSpec& spec_in) {
    ContentPoolSpec spec = spec_in;
    spec.validate();
    auto dists = ContentPoolSpec::default_engagement_dists();
    for (const auto& [k, v] : spec.engagement_dists) {
        if (!dists.contains(k)) throw InvalidSpec("unknown engagement metric: " + k);
        dists[k] = v;
    }
    spec.engagement_dists = std::move(dists);
    if (spec.topic_catalog.empty()) spec.topic_catalog = ContentPoolSpec::default_topic_catalog();

    Rng rng(mix_seed(spec.seed, 0x706F6F6CULL));  // pool-generation stream

    // party mass implied by the stance mix, used to allocate channels
    const double dem_mass = spec.stance_mix[0] + spec.stance_mix[3];
    const double rep_mass = spec.stance_mix[1] + spec.stance_mix[2];
    const double neutral_mass = spec.stance_mix[4];

    std::vector<ChannelRecord> channels(static_cast<std::size_t>(spec.n_channels));
    // planted channel party: 0 = Dem, 1 = Rep, 2 = no party
    std::vector<int> channel_party(channels.size(), 2);
    std::vector<std::size_t> dem_channels, rep_channels, no_party_channels;
    for (std::size_t c = 0; c < channels.size(); ++c) {
        auto& ch = channels[c];
        ch.channel_id = zero_pad_id("c", c, 5);
        ch.followers = static_cast<std::int64_t>(std::llround(spec.dist("followers").sample(rng)));
        ch.cumulative_likes =
            static_cast<std::int64_t>(std::llround(spec.dist("channel_likes").sample(rng)));
        ch.video_count =
            std::max<std::int64_t>(1, static_cast<std::int64_t>(
                                           std::llround(spec.dist("channel_videos").sample(rng))));
        ch.verified = rng.uniform() < spec.verified_prob;
        const double u = rng.uniform() * (dem_mass + rep_mass + neutral_mass);
        if (u < dem_mass) {
            channel_party[c] = 0;
            dem_channels.push_back(c);
        } else if (u < dem_mass + rep_mass) {
            channel_party[c] = 1;
            rep_channels.push_back(c);
        } else {
            no_party_channels.push_back(c);
        }
    }

    // Stances are drawn straight from stance_mix so pool frequencies converge
    // to the mix; videos then land on a channel of the matching party with
    // probability kChannelPurity, else on a uniformly random channel.
    constexpr double kChannelPurity = 0.9;
    std::vector<VideoRecord> videos(static_cast<std::size_t>(spec.n_videos));
    const std::int64_t backfill_hours = 16 * 168;  // publish times reach 16 weeks back

    std::array<double, kNumStances> mix_weights{};
    for (int s = 0; s < kNumStances; ++s) mix_weights[static_cast<std::size_t>(s)] = spec.stance_mix[static_cast<std::size_t>(s)];

    for (std::size_t i = 0; i < videos.size(); ++i) {
        auto& v = videos[i];
        v.video_id = zero_pad_id("v", i, 7);
        v.publish_hour = -static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(backfill_hours) + 1));
        v.duration_s = spec.dist("duration").sample(rng);
        v.is_political = rng.uniform() < spec.political_fraction;

        std::optional<Alignment> party_alignment;
        if (v.is_political) {
            const auto stance = static_cast<StanceLabel>(pick_weighted(rng, mix_weights));
            v.stance = stance;
            v.is_election_related = rng.uniform() < 0.5;
            if (alignment_of(stance) != Alignment::Neutral) party_alignment = alignment_of(stance);

            // one or two topics weighted by the stance's topic profile
            const int n_topics = 1 + static_cast<int>(rng.below(2));
            for (int t = 0; t < n_topics; ++t) {
                double total = 0.0;
                for (const auto& topic : spec.topic_catalog)
                    total += topic.stance_weights[static_cast<std::size_t>(stance)];
                double u = rng.uniform() * total;
                for (const auto& topic : spec.topic_catalog) {
                    u -= topic.stance_weights[static_cast<std::size_t>(stance)];
                    if (u < 0.0) {
                        v.topics.push_back(topic.topic_id);
                        break;
                    }
                }
            }
            std::sort(v.topics.begin(), v.topics.end());
            v.topics.erase(std::unique(v.topics.begin(), v.topics.end()), v.topics.end());
        }

        // channel assignment: partisan content concentrates on same-party
        // channels, everything else on no-party channels, so partisan
        // channels clear the alignment threshold the way curated ones do
        std::size_t channel_idx;
        const std::vector<std::size_t>* home = &no_party_channels;
        if (party_alignment.has_value())
            home = party_alignment == Alignment::DemAligned ? &dem_channels : &rep_channels;
        if (!home->empty() && rng.uniform() < kChannelPurity)
            channel_idx = (*home)[rng.below(home->size())];
        else
            channel_idx = rng.below(channels.size());
        v.channel_id = channels[channel_idx].channel_id;

        // engagement counters; shares <= plays by rejecting the pair
        for (int attempt = 0;; ++attempt) {
            v.plays = static_cast<std::int64_t>(std::llround(spec.dist("plays").sample(rng)));
            v.shares = static_cast<std::int64_t>(std::llround(spec.dist("shares").sample(rng)));
            if (v.shares <= v.plays) break;
            if (attempt >= 10000) {
                v.shares = v.plays;  // dists barely overlap; give up rejecting
                break;
            }
        }
        v.likes = static_cast<std::int64_t>(std::llround(spec.dist("likes").sample(rng)));
        v.comments = static_cast<std::int64_t>(std::llround(spec.dist("comments").sample(rng)));

        if (v.is_political && v.stance && alignment_of(*v.stance) != Alignment::Neutral) {
            double co = std::clamp(spec.dist("copartisan_comment_prop").sample(rng), 0.0, 1.0);
            double opp = std::clamp(spec.dist("opposing_comment_prop").sample(rng), 0.0, 1.0);
            if (co + opp > 1.0) {
                const double scale = 1.0 / (co + opp);
                co *= scale;
                opp *= scale;
            }
            v.copartisan_comment_prop = co;
            v.opposing_comment_prop = opp;
        }
    }

    return World::from_records(std::move(videos), std::move(channels));
}

}  // namespace feedaudit
