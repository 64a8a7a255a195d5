#pragma once

#include <span>

#include "feedaudit/core.hpp"

namespace feedaudit {

struct NeutralVideo : DataError {
    using DataError::DataError;
};
struct EmptyComments : DataError {
    using DataError::DataError;
};

enum class ChannelClass : std::uint8_t { DemAligned, RepAligned, Unaligned, NeedsSupplement };
std::string to_string(ChannelClass c);

// A channel is party-aligned when strictly more than `threshold` of its
// stanced videos share one alignment; Neutral videos stay in the
// denominator. Fewer than `min_videos` videos asks the caller to fetch more.
ChannelClass classify_channel(std::span<const StanceLabel> stanced_videos,
                              std::size_t min_videos = 10, double threshold = 0.75);

struct CommentMix {
    double copartisan = 0.0;
    double opposing = 0.0;
    double neutral = 0.0;
};

// Proportions of comment stances aligned with, against, or neutral to the
// video's alignment; the three sum to 1.
CommentMix comment_alignment_proportions(Alignment video_alignment,
                                         std::span<const StanceLabel> comment_stances);

}  // namespace feedaudit
