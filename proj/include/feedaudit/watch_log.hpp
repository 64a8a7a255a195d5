#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "feedaudit/core.hpp"

namespace feedaudit {

// JSON Lines persistence. Field names are part of the on-disk format
// contract (documented in the README):
//
// run log    first line  {"record":"run_header","run_id","week","state",
//                         "leaning","conditioning_count","status","seed"}
//            then        {"record":"watch","run_id","video_id",
//                         "virtual_time","stage","ordinal"}
// pool file  {"record":"video", ...VideoRecord fields...}
//            {"record":"channel", ...ChannelRecord fields...}

void write_run_log(const ExperimentRun& run, std::ostream& out);
void write_run_log(const ExperimentRun& run, const std::filesystem::path& path);
ExperimentRun read_run_log(std::istream& in);
ExperimentRun read_run_log(const std::filesystem::path& path);

void write_pool(const std::vector<VideoRecord>& videos, const std::vector<ChannelRecord>& channels,
                std::ostream& out);
void write_pool(const std::vector<VideoRecord>& videos, const std::vector<ChannelRecord>& channels,
                const std::filesystem::path& path);
void read_pool(std::istream& in, std::vector<VideoRecord>& videos,
               std::vector<ChannelRecord>& channels);
void read_pool(const std::filesystem::path& path, std::vector<VideoRecord>& videos,
               std::vector<ChannelRecord>& channels);

}  // namespace feedaudit
