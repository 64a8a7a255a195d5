#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace feedaudit {

// ---------------------------------------------------------------------------
// Errors shared across modules. Each named error from a module contract gets
// its own type so tests can assert on the exact failure.
// ---------------------------------------------------------------------------
struct FeedauditError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : FeedauditError {
    using FeedauditError::FeedauditError;
};
struct DataError : FeedauditError {
    using FeedauditError::FeedauditError;
};
struct InvalidEngagement : DataError {
    using DataError::DataError;
};
struct InvalidSpec : ConfigError {
    using ConfigError::ConfigError;
};
struct EmptyPool : DataError {
    using DataError::DataError;
};
struct InsufficientData : DataError {
    using DataError::DataError;
};

// ---------------------------------------------------------------------------
// Labels
// ---------------------------------------------------------------------------
enum class StanceLabel : std::uint8_t {
    ProDemocrat,
    AntiDemocrat,
    ProRepublican,
    AntiRepublican,
    Neutral,
};
inline constexpr int kNumStances = 5;

enum class Alignment : std::uint8_t { DemAligned, RepAligned, Neutral };

enum class State : std::uint8_t { NewYork, Texas, Georgia };
enum class Leaning : std::uint8_t { Democrat, Republican, NeutralControl };
enum class Stage : std::uint8_t { Conditioning, Recommendation };
enum class RunStatus : std::uint8_t { Completed, FailedBotDetection, FailedNetwork };

Alignment alignment_of(StanceLabel stance);

std::string to_string(StanceLabel s);
std::string to_string(Alignment a);
std::string to_string(State s);
std::string to_string(Leaning l);
std::string to_string(Stage s);
std::string to_string(RunStatus s);

StanceLabel stance_from_string(const std::string& s);
Alignment alignment_from_string(const std::string& s);
State state_from_string(const std::string& s);
Leaning leaning_from_string(const std::string& s);
Stage stage_from_string(const std::string& s);
RunStatus status_from_string(const std::string& s);

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------
struct VideoRecord {
    std::string video_id;
    std::string channel_id;
    // Whole hours relative to campaign start; negative = published before.
    std::int64_t publish_hour = 0;
    double duration_s = 0.0;
    bool is_political = false;
    bool is_election_related = false;
    std::optional<StanceLabel> stance;
    std::vector<std::string> topics;  // sorted, unique
    std::int64_t plays = 0;
    std::int64_t shares = 0;
    std::int64_t likes = 0;
    std::int64_t comments = 0;
    double opposing_comment_prop = 0.0;
    double copartisan_comment_prop = 0.0;
};

struct ChannelRecord {
    std::string channel_id;
    std::int64_t followers = 0;
    std::int64_t cumulative_likes = 0;
    std::int64_t video_count = 0;
    bool verified = false;
    std::optional<Alignment> alignment;  // set only by classify_channel
};

struct ExperimentCondition {
    State state = State::Georgia;
    Leaning leaning = Leaning::NeutralControl;

    bool operator==(const ExperimentCondition&) const = default;
};
std::string to_string(const ExperimentCondition& c);  // "Georgia/Democrat"

struct WatchEvent {
    std::string run_id;
    std::string video_id;
    std::int64_t virtual_time_s = 0;
    Stage stage = Stage::Recommendation;
    std::int64_t ordinal = 0;

    bool operator==(const WatchEvent&) const = default;
};

struct ExperimentRun {
    std::string run_id;
    std::int64_t week = 0;
    ExperimentCondition condition;
    std::int64_t conditioning_count = 0;
    std::vector<WatchEvent> events;
    RunStatus status = RunStatus::Completed;
    std::uint64_t seed = 0;

    std::int64_t recommendation_count() const;
};

// ---------------------------------------------------------------------------
// Derived engagement metrics
// ---------------------------------------------------------------------------
struct DerivedEngagement {
    std::int64_t recommendations = 0;  // plays - shares
    double likes_per_rec = 0.0;
    double comments_per_rec = 0.0;
    double engagement_rate = 0.0;  // (likes + comments + shares) / plays
};

// Zero denominators yield 0 so share-only or zero-play items stay analyzable.
DerivedEngagement derived_metrics(const VideoRecord& video);

// Record-level invariant check used when ingesting external data. Returns a
// list of human-readable problems; empty means valid.
std::vector<std::string> validate_video(const VideoRecord& v);
std::vector<std::string> validate_channel(const ChannelRecord& c);

// ---------------------------------------------------------------------------
// Watch-log validation
// ---------------------------------------------------------------------------
struct ValidationLimits {
    std::int64_t conditioning_cap = 400;
    std::int64_t recommendation_cap = 1200;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Violations are data, not failures: ordering, caps, control conditioning,
// and (when a pool is supplied) unknown video ids.
ValidationReport validate_watch_log(const ExperimentRun& run,
                                    const ValidationLimits& limits = {},
                                    const std::vector<std::string>* known_video_ids = nullptr);

}  // namespace feedaudit
