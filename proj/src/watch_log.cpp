#include "feedaudit/watch_log.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

using nlohmann::json;

namespace feedaudit {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open for reading: " + path.string());
    return in;
}

json video_to_json(const VideoRecord& v) {
    json j{{"record", "video"},
           {"video_id", v.video_id},
           {"channel_id", v.channel_id},
           {"publish_hour", v.publish_hour},
           {"duration", v.duration_s},
           {"is_political", v.is_political},
           {"is_election_related", v.is_election_related},
           {"topics", v.topics},
           {"plays", v.plays},
           {"shares", v.shares},
           {"likes", v.likes},
           {"comments", v.comments},
           {"opposing_comment_prop", v.opposing_comment_prop},
           {"copartisan_comment_prop", v.copartisan_comment_prop}};
    if (v.stance) j["stance"] = to_string(*v.stance);
    return j;
}

VideoRecord video_from_json(const json& j) {
    VideoRecord v;
    v.video_id = j.at("video_id").get<std::string>();
    v.channel_id = j.at("channel_id").get<std::string>();
    v.publish_hour = j.at("publish_hour").get<std::int64_t>();
    v.duration_s = j.at("duration").get<double>();
    v.is_political = j.at("is_political").get<bool>();
    v.is_election_related = j.at("is_election_related").get<bool>();
    v.topics = j.at("topics").get<std::vector<std::string>>();
    v.plays = j.at("plays").get<std::int64_t>();
    v.shares = j.at("shares").get<std::int64_t>();
    v.likes = j.at("likes").get<std::int64_t>();
    v.comments = j.at("comments").get<std::int64_t>();
    v.opposing_comment_prop = j.at("opposing_comment_prop").get<double>();
    v.copartisan_comment_prop = j.at("copartisan_comment_prop").get<double>();
    if (j.contains("stance")) v.stance = stance_from_string(j.at("stance").get<std::string>());
    auto issues = validate_video(v);
    if (!issues.empty()) throw DataError("invalid video " + v.video_id + ": " + issues.front());
    return v;
}

json channel_to_json(const ChannelRecord& c) {
    json j{{"record", "channel"},
           {"channel_id", c.channel_id},
           {"followers", c.followers},
           {"cumulative_likes", c.cumulative_likes},
           {"video_count", c.video_count},
           {"verified", c.verified}};
    if (c.alignment) j["alignment"] = to_string(*c.alignment);
    return j;
}

ChannelRecord channel_from_json(const json& j) {
    ChannelRecord c;
    c.channel_id = j.at("channel_id").get<std::string>();
    c.followers = j.at("followers").get<std::int64_t>();
    c.cumulative_likes = j.at("cumulative_likes").get<std::int64_t>();
    c.video_count = j.at("video_count").get<std::int64_t>();
    c.verified = j.at("verified").get<bool>();
    if (j.contains("alignment"))
        c.alignment = alignment_from_string(j.at("alignment").get<std::string>());
    auto issues = validate_channel(c);
    if (!issues.empty()) throw DataError("invalid channel " + c.channel_id + ": " + issues.front());
    return c;
}

json parse_line(const std::string& line, std::size_t lineno) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw DataError("malformed JSON at line " + std::to_string(lineno));
    return j;
}

}  // namespace

void write_run_log(const ExperimentRun& run, std::ostream& out) {
    json header{{"record", "run_header"},
                {"run_id", run.run_id},
                {"week", run.week},
                {"state", to_string(run.condition.state)},
                {"leaning", to_string(run.condition.leaning)},
                {"conditioning_count", run.conditioning_count},
                {"status", to_string(run.status)},
                {"seed", run.seed}};
    out << header.dump() << '\n';
    for (const auto& e : run.events) {
        json j{{"record", "watch"},
               {"run_id", e.run_id},
               {"video_id", e.video_id},
               {"virtual_time", e.virtual_time_s},
               {"stage", to_string(e.stage)},
               {"ordinal", e.ordinal}};
        out << j.dump() << '\n';
    }
}

void write_run_log(const ExperimentRun& run, const std::filesystem::path& path) {
    auto out = open_out(path);
    write_run_log(run, out);
}

ExperimentRun read_run_log(std::istream& in) {
    ExperimentRun run;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = parse_line(line, lineno);
        const auto kind = j.at("record").get<std::string>();
        if (kind == "run_header") {
            if (have_header) throw DataError("duplicate run_header");
            run.run_id = j.at("run_id").get<std::string>();
            run.week = j.at("week").get<std::int64_t>();
            run.condition.state = state_from_string(j.at("state").get<std::string>());
            run.condition.leaning = leaning_from_string(j.at("leaning").get<std::string>());
            run.conditioning_count = j.at("conditioning_count").get<std::int64_t>();
            run.status = status_from_string(j.at("status").get<std::string>());
            run.seed = j.at("seed").get<std::uint64_t>();
            have_header = true;
        } else if (kind == "watch") {
            WatchEvent e;
            e.run_id = j.at("run_id").get<std::string>();
            e.video_id = j.at("video_id").get<std::string>();
            e.virtual_time_s = j.at("virtual_time").get<std::int64_t>();
            e.stage = stage_from_string(j.at("stage").get<std::string>());
            e.ordinal = j.at("ordinal").get<std::int64_t>();
            run.events.push_back(std::move(e));
        } else {
            throw DataError("unknown record kind: " + kind);
        }
    }
    if (!have_header) throw DataError("run log missing header record");
    return run;
}

ExperimentRun read_run_log(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_run_log(in);
}

void write_pool(const std::vector<VideoRecord>& videos, const std::vector<ChannelRecord>& channels,
                std::ostream& out) {
    for (const auto& c : channels) out << channel_to_json(c).dump() << '\n';
    for (const auto& v : videos) out << video_to_json(v).dump() << '\n';
}

void write_pool(const std::vector<VideoRecord>& videos, const std::vector<ChannelRecord>& channels,
                const std::filesystem::path& path) {
    auto out = open_out(path);
    write_pool(videos, channels, out);
}

void read_pool(std::istream& in, std::vector<VideoRecord>& videos,
               std::vector<ChannelRecord>& channels) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = parse_line(line, lineno);
        const auto kind = j.at("record").get<std::string>();
        if (kind == "video")
            videos.push_back(video_from_json(j));
        else if (kind == "channel")
            channels.push_back(channel_from_json(j));
        else
            throw DataError("unknown record kind in pool: " + kind);
    }
}

void read_pool(const std::filesystem::path& path, std::vector<VideoRecord>& videos,
               std::vector<ChannelRecord>& channels) {
    auto in = open_in(path);
    read_pool(in, videos, channels);
}

}  // namespace feedaudit
