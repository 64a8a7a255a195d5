#include "feedaudit/core.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

namespace feedaudit {

Alignment alignment_of(StanceLabel stance) {
    switch (stance) {
        case StanceLabel::ProDemocrat:
        case StanceLabel::AntiRepublican:
            return Alignment::DemAligned;
        case StanceLabel::ProRepublican:
        case StanceLabel::AntiDemocrat:
            return Alignment::RepAligned;
        case StanceLabel::Neutral:
            return Alignment::Neutral;
    }
    throw std::logic_error("alignment_of: unreachable");
}

std::string to_string(StanceLabel s) {
    switch (s) {
        case StanceLabel::ProDemocrat: return "ProDemocrat";
        case StanceLabel::AntiDemocrat: return "AntiDemocrat";
        case StanceLabel::ProRepublican: return "ProRepublican";
        case StanceLabel::AntiRepublican: return "AntiRepublican";
        case StanceLabel::Neutral: return "Neutral";
    }
    return "?";
}

std::string to_string(Alignment a) {
    switch (a) {
        case Alignment::DemAligned: return "DemAligned";
        case Alignment::RepAligned: return "RepAligned";
        case Alignment::Neutral: return "Neutral";
    }
    return "?";
}

std::string to_string(State s) {
    switch (s) {
        case State::NewYork: return "NewYork";
        case State::Texas: return "Texas";
        case State::Georgia: return "Georgia";
    }
    return "?";
}

std::string to_string(Leaning l) {
    switch (l) {
        case Leaning::Democrat: return "Democrat";
        case Leaning::Republican: return "Republican";
        case Leaning::NeutralControl: return "NeutralControl";
    }
    return "?";
}

std::string to_string(Stage s) {
    return s == Stage::Conditioning ? "conditioning" : "recommendation";
}

std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Completed: return "Completed";
        case RunStatus::FailedBotDetection: return "FailedBotDetection";
        case RunStatus::FailedNetwork: return "FailedNetwork";
    }
    return "?";
}

std::string to_string(const ExperimentCondition& c) {
    return to_string(c.state) + "/" + to_string(c.leaning);
}

StanceLabel stance_from_string(const std::string& s) {
    if (s == "ProDemocrat") return StanceLabel::ProDemocrat;
    if (s == "AntiDemocrat") return StanceLabel::AntiDemocrat;
    if (s == "ProRepublican") return StanceLabel::ProRepublican;
    if (s == "AntiRepublican") return StanceLabel::AntiRepublican;
    if (s == "Neutral") return StanceLabel::Neutral;
    throw DataError("unknown stance label: " + s);
}

Alignment alignment_from_string(const std::string& s) {
    if (s == "DemAligned") return Alignment::DemAligned;
    if (s == "RepAligned") return Alignment::RepAligned;
    if (s == "Neutral") return Alignment::Neutral;
    throw DataError("unknown alignment: " + s);
}

State state_from_string(const std::string& s) {
    if (s == "NewYork") return State::NewYork;
    if (s == "Texas") return State::Texas;
    if (s == "Georgia") return State::Georgia;
    throw DataError("unknown state: " + s);
}

Leaning leaning_from_string(const std::string& s) {
    if (s == "Democrat") return Leaning::Democrat;
    if (s == "Republican") return Leaning::Republican;
    if (s == "NeutralControl") return Leaning::NeutralControl;
    throw DataError("unknown leaning: " + s);
}

Stage stage_from_string(const std::string& s) {
    if (s == "conditioning") return Stage::Conditioning;
    if (s == "recommendation") return Stage::Recommendation;
    throw DataError("unknown stage: " + s);
}

RunStatus status_from_string(const std::string& s) {
    if (s == "Completed") return RunStatus::Completed;
    if (s == "FailedBotDetection") return RunStatus::FailedBotDetection;
    if (s == "FailedNetwork") return RunStatus::FailedNetwork;
    throw DataError("unknown run status: " + s);
}

std::int64_t ExperimentRun::recommendation_count() const {
    return static_cast<std::int64_t>(
        std::count_if(events.begin(), events.end(),
                      [](const WatchEvent& e) { return e.stage == Stage::Recommendation; }));
}

DerivedEngagement derived_metrics(const VideoRecord& video) {
    if (video.plays < 0 || video.shares < 0 || video.likes < 0 || video.comments < 0)
        throw InvalidEngagement("negative engagement count on video " + video.video_id);
    if (video.shares > video.plays)
        throw InvalidEngagement("shares exceed plays on video " + video.video_id);

    DerivedEngagement d;
    d.recommendations = video.plays - video.shares;
    const auto rec = static_cast<double>(d.recommendations);
    d.likes_per_rec = d.recommendations > 0 ? static_cast<double>(video.likes) / rec : 0.0;
    d.comments_per_rec = d.recommendations > 0 ? static_cast<double>(video.comments) / rec : 0.0;
    d.engagement_rate =
        video.plays > 0
            ? static_cast<double>(video.likes + video.comments + video.shares) /
                  static_cast<double>(video.plays)
            : 0.0;
    return d;
}

std::vector<std::string> validate_video(const VideoRecord& v) {
    std::vector<std::string> issues;
    if (v.video_id.empty()) issues.push_back("empty video_id");
    if (v.plays < 0 || v.shares < 0 || v.likes < 0 || v.comments < 0)
        issues.push_back("negative engagement count");
    if (v.shares > v.plays) issues.push_back("shares exceed plays");
    if (v.duration_s < 0) issues.push_back("negative duration");
    for (double p : {v.opposing_comment_prop, v.copartisan_comment_prop})
        if (p < 0.0 || p > 1.0) issues.push_back("comment proportion outside [0,1]");
    if (v.opposing_comment_prop + v.copartisan_comment_prop > 1.0 + 1e-12)
        issues.push_back("comment proportions sum above 1");
    if (v.is_election_related && !v.is_political)
        issues.push_back("election-related video not flagged political");
    if (v.stance.has_value() && !v.is_political)
        issues.push_back("stanced video not flagged political");
    return issues;
}

std::vector<std::string> validate_channel(const ChannelRecord& c) {
    std::vector<std::string> issues;
    if (c.channel_id.empty()) issues.push_back("empty channel_id");
    if (c.followers < 0 || c.cumulative_likes < 0 || c.video_count < 0)
        issues.push_back("negative channel count");
    return issues;
}

ValidationReport validate_watch_log(const ExperimentRun& run, const ValidationLimits& limits,
                                    const std::vector<std::string>* known_video_ids) {
    ValidationReport report;
    auto fail = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

    std::int64_t n_cond = 0, n_rec = 0;
    std::int64_t last_ord[2] = {-1, -1};
    std::int64_t last_time = std::numeric_limits<std::int64_t>::min();
    for (const auto& e : run.events) {
        const int si = e.stage == Stage::Conditioning ? 0 : 1;
        if (e.stage == Stage::Conditioning)
            ++n_cond;
        else
            ++n_rec;
        if (e.ordinal <= last_ord[si])
            fail("ordinal not strictly increasing in " + to_string(e.stage) + " stage at " +
                 std::to_string(e.ordinal));
        last_ord[si] = e.ordinal;
        if (e.virtual_time_s < last_time) fail("virtual time decreases at ordinal " + std::to_string(e.ordinal));
        last_time = e.virtual_time_s;
        if (e.run_id != run.run_id) fail("event run_id mismatch at ordinal " + std::to_string(e.ordinal));
    }

    if (n_cond != run.conditioning_count)
        fail("conditioning_count field (" + std::to_string(run.conditioning_count) +
             ") disagrees with conditioning events (" + std::to_string(n_cond) + ")");
    if (n_cond > limits.conditioning_cap)
        fail("conditioning cap exceeded: " + std::to_string(n_cond) + " > " +
             std::to_string(limits.conditioning_cap));
    if (n_rec > limits.recommendation_cap)
        fail("recommendation cap exceeded: " + std::to_string(n_rec) + " > " +
             std::to_string(limits.recommendation_cap));
    if (run.condition.leaning == Leaning::NeutralControl && run.conditioning_count != 0)
        fail("control must skip conditioning");
    if (run.week < 0) fail("negative week index");

    if (known_video_ids != nullptr) {
        std::unordered_set<std::string_view> pool(known_video_ids->begin(), known_video_ids->end());
        for (const auto& e : run.events)
            if (!pool.contains(e.video_id)) fail("unknown video id: " + e.video_id);
    }
    return report;
}

}  // namespace feedaudit
