#include "feedaudit/channels.hpp"

namespace feedaudit {

std::string to_string(ChannelClass c) {
    switch (c) {
        case ChannelClass::DemAligned: return "DemAligned";
        case ChannelClass::RepAligned: return "RepAligned";
        case ChannelClass::Unaligned: return "Unaligned";
        case ChannelClass::NeedsSupplement: return "NeedsSupplement";
    }
    return "?";
}

ChannelClass classify_channel(std::span<const StanceLabel> stanced_videos, std::size_t min_videos,
                              double threshold) {
    if (stanced_videos.size() < min_videos) return ChannelClass::NeedsSupplement;
    double dem = 0.0, rep = 0.0;
    for (StanceLabel s : stanced_videos) {
        switch (alignment_of(s)) {
            case Alignment::DemAligned: dem += 1.0; break;
            case Alignment::RepAligned: rep += 1.0; break;
            case Alignment::Neutral: break;
        }
    }
    const auto total = static_cast<double>(stanced_videos.size());
    if (dem / total > threshold) return ChannelClass::DemAligned;
    if (rep / total > threshold) return ChannelClass::RepAligned;
    return ChannelClass::Unaligned;
}

CommentMix comment_alignment_proportions(Alignment video_alignment,
                                         std::span<const StanceLabel> comment_stances) {
    if (video_alignment == Alignment::Neutral)
        throw NeutralVideo("comment alignment is undefined for a neutral video");
    if (comment_stances.empty()) throw EmptyComments("no comments to classify");

    const Alignment opposite =
        video_alignment == Alignment::DemAligned ? Alignment::RepAligned : Alignment::DemAligned;
    double co = 0.0, opp = 0.0, neu = 0.0;
    for (StanceLabel s : comment_stances) {
        const Alignment a = alignment_of(s);
        if (a == video_alignment)
            co += 1.0;
        else if (a == opposite)
            opp += 1.0;
        else
            neu += 1.0;
    }
    const auto total = static_cast<double>(comment_stances.size());
    return {co / total, opp / total, neu / total};
}

}  // namespace feedaudit
