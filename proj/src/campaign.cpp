#include "feedaudit/campaign.hpp"

#include <algorithm>
#include <cmath>

namespace feedaudit {

std::vector<ConditionReplicates> CampaignSpec::default_conditions() {
    std::vector<ConditionReplicates> out;
    for (State s : {State::NewYork, State::Texas, State::Georgia}) {
        out.push_back({{s, Leaning::Democrat}, 3});
        out.push_back({{s, Leaning::Republican}, 3});
    }
    out.push_back({{State::Georgia, Leaning::NeutralControl}, 3});
    return out;
}

void CampaignSpec::validate() const {
    if (weeks <= 0) throw InvalidSpec("campaign needs at least one week");
    if (bots_per_week <= 0) throw InvalidSpec("campaign needs at least one bot per week");
    if (rec_batch_size < 1) throw InvalidSpec("rec_batch_size must be >= 1");
    if (rec_cap < 0 || rec_window_hours < 0) throw InvalidSpec("negative recommendation limits");
    if (conditioning_channels_per_run < 1 || videos_per_channel < 1)
        throw InvalidSpec("conditioning parameters must be positive");
    if (conditioning_cap < 0) throw InvalidSpec("conditioning cap must be non-negative");
    if (min_pair_length < 0) throw InvalidSpec("min_pair_length must be non-negative");
    if (failure_model.probability < 0.0 || failure_model.probability > 1.0)
        throw InvalidSpec("failure probability outside [0,1]");
    if (failure_model.bot_detection_share < 0.0 || failure_model.bot_detection_share > 1.0)
        throw InvalidSpec("bot detection share outside [0,1]");
    const auto& conds = conditions.empty() ? default_conditions() : conditions;
    int total = 0;
    for (const auto& c : conds) {
        if (c.replicates < 0) throw InvalidSpec("negative replicate count");
        total += c.replicates;
    }
    if (total != bots_per_week)
        throw InvalidSpec("condition replicates sum to " + std::to_string(total) +
                          " but bots_per_week is " + std::to_string(bots_per_week));
}

namespace {

std::string make_run_id(std::int64_t week, int bot) {
    auto pad = [](std::int64_t v, int w) {
        std::string s = std::to_string(v);
        while (static_cast<int>(s.size()) < w) s.insert(s.begin(), '0');
        return s;
    };
    return "w" + pad(week, 2) + "b" + pad(bot, 2);
}

}  // namespace

std::vector<RunSpec> schedule_cohorts(const CampaignSpec& spec, std::uint64_t master_seed) {
    spec.validate();
    const auto conds = spec.conditions.empty() ? CampaignSpec::default_conditions() : spec.conditions;
    std::vector<RunSpec> out;
    out.reserve(static_cast<std::size_t>(spec.weeks * spec.bots_per_week));
    for (std::int64_t week = 0; week < spec.weeks; ++week) {
        int bot = 0;
        for (const auto& c : conds) {
            for (int r = 0; r < c.replicates; ++r, ++bot) {
                RunSpec rs;
                rs.run_id = make_run_id(week, bot);
                rs.week = week;
                rs.bot_index = bot;
                rs.condition = c.condition;
                rs.seed = mix_seed(master_seed, static_cast<std::uint64_t>(week),
                                   static_cast<std::uint64_t>(bot));
                out.push_back(std::move(rs));
            }
        }
    }
    return out;
}

std::vector<WatchEvent> run_conditioning(const RunSpec& run, const CampaignSpec& spec,
                                         const World& world, BotState& bot, Rng& rng) {
    if (run.condition.leaning == Leaning::NeutralControl)
        throw InvalidSpec("neutral control runs bypass conditioning");
    const std::size_t roster_idx = run.condition.leaning == Leaning::Democrat ? 0 : 1;
    const auto& roster = world.conditioning_roster[roster_idx];
    const auto want = static_cast<std::size_t>(spec.conditioning_channels_per_run);
    if (roster.size() < want)
        throw InsufficientChannels("only " + std::to_string(roster.size()) + " " +
                                   to_string(run.condition.leaning) +
                                   "-aligned channels available, need " + std::to_string(want));

    // partial Fisher-Yates: `want` distinct channels, uniformly
    std::vector<std::size_t> picks(roster.begin(), roster.end());
    for (std::size_t i = 0; i < want; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(picks.size() - i));
        std::swap(picks[i], picks[j]);
    }
    picks.resize(want);

    std::vector<WatchEvent> events;
    std::int64_t clock = run.week * 168 * 3600;  // runs start on their week boundary
    std::int64_t ordinal = 0;
    for (std::size_t c : picks) {
        const auto& vids = world.channel_videos[c];  // already newest first
        const auto take = std::min<std::size_t>(vids.size(),
                                                static_cast<std::size_t>(spec.videos_per_channel));
        for (std::size_t k = 0; k < take; ++k) {
            if (ordinal >= spec.conditioning_cap) return events;
            WatchEvent e;
            e.run_id = run.run_id;
            e.video_id = world.videos[vids[k]].video_id;
            e.virtual_time_s = clock;
            e.stage = Stage::Conditioning;
            e.ordinal = ordinal++;
            events.push_back(std::move(e));
            const auto& v = world.videos[vids[k]];
            bot.observe(v.stance ? alignment_of(*v.stance) : Alignment::Neutral);
            clock += 60;  // one minute per conditioning watch
        }
    }
    return events;
}

RecommendationLog run_recommendation(const RunSpec& run, const CampaignSpec& spec,
                                     const Recommender& recommender, BotState& bot, Rng& rng,
                                     std::int64_t start_time_s) {
    RecommendationLog log;
    const std::int64_t max_batches =
        std::min<std::int64_t>(spec.rec_window_hours,
                               (spec.rec_cap + spec.rec_batch_size - 1) / spec.rec_batch_size);

    // failure decided up front: a uniformly chosen batch boundary truncates
    std::int64_t fail_batch = -1;
    RunStatus fail_status = RunStatus::Completed;
    if (spec.failure_model.probability > 0.0 && rng.uniform() < spec.failure_model.probability) {
        fail_batch = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(
            std::max<std::int64_t>(1, max_batches))));
        fail_status = rng.uniform() < spec.failure_model.bot_detection_share
                          ? RunStatus::FailedBotDetection
                          : RunStatus::FailedNetwork;
    }

    std::int64_t ordinal = 0;
    const std::int64_t start_hour = (start_time_s + 3599) / 3600;
    for (std::int64_t b = 0; b < max_batches; ++b) {
        if (fail_batch >= 0 && b >= fail_batch) {
            log.status = fail_status;
            return log;
        }
        const std::int64_t batch_start_s = (start_hour + b) * 3600;
        for (int i = 0; i < spec.rec_batch_size; ++i) {
            if (ordinal >= spec.rec_cap) return log;
            const auto& video = recommender.recommend_next(bot, run.week, rng);
            WatchEvent e;
            e.run_id = run.run_id;
            e.video_id = video.video_id;
            e.virtual_time_s = batch_start_s + i * 10;  // each watch up to 10 seconds
            e.stage = Stage::Recommendation;
            e.ordinal = ordinal++;
            log.events.push_back(std::move(e));
        }
    }
    return log;
}

ExperimentRun execute_run(const RunSpec& run, const CampaignSpec& spec, const World& world,
                          const Recommender& recommender) {
    spec.validate();
    Rng rng(run.seed);
    BotState bot(/*history_window=*/64);

    ExperimentRun result;
    result.run_id = run.run_id;
    result.week = run.week;
    result.condition = run.condition;
    result.seed = run.seed;

    std::int64_t clock = run.week * 168 * 3600;
    if (run.condition.leaning != Leaning::NeutralControl) {
        result.events = run_conditioning(run, spec, world, bot, rng);
        result.conditioning_count = static_cast<std::int64_t>(result.events.size());
        if (!result.events.empty()) clock = result.events.back().virtual_time_s + 60;
    }
    // conditioning occupies day one; recommendation batches start a day in
    clock = std::max(clock, run.week * 168 * 3600 + 24 * 3600);

    auto rec = run_recommendation(run, spec, recommender, bot, rng, clock);
    result.status = rec.status;
    result.events.insert(result.events.end(), rec.events.begin(), rec.events.end());
    return result;
}

PairMatchResult pair_match(const std::vector<const ExperimentRun*>& runs,
                           std::int64_t min_pair_length) {
    PairMatchResult result;

    std::vector<const ExperimentRun*> dems, reps;
    for (const auto* run : runs) {
        if (run->condition.leaning == Leaning::Democrat)
            dems.push_back(run);
        else if (run->condition.leaning == Leaning::Republican)
            reps.push_back(run);
    }
    auto by_length_desc = [](const ExperimentRun* a, const ExperimentRun* b) {
        const auto la = a->recommendation_count(), lb = b->recommendation_count();
        if (la != lb) return la > lb;
        return a->run_id < b->run_id;
    };
    std::sort(dems.begin(), dems.end(), by_length_desc);
    std::sort(reps.begin(), reps.end(), by_length_desc);

    const std::size_t n_pairs = std::min(dems.size(), reps.size());
    for (std::size_t i = 0; i < n_pairs; ++i) {
        const auto n = std::min(dems[i]->recommendation_count(), reps[i]->recommendation_count());
        if (n < min_pair_length) {
            result.excluded.push_back({dems[i]->run_id, reps[i]->run_id, dems[i]->week,
                                       dems[i]->condition.state, n,
                                       "below " + std::to_string(min_pair_length)});
        } else {
            result.pairs.push_back(
                {dems[i]->run_id, reps[i]->run_id, dems[i]->week, dems[i]->condition.state, n});
        }
    }
    for (std::size_t i = n_pairs; i < dems.size(); ++i) result.unpaired.push_back(dems[i]->run_id);
    for (std::size_t i = n_pairs; i < reps.size(); ++i) result.unpaired.push_back(reps[i]->run_id);
    return result;
}

}  // namespace feedaudit
