#include "feedaudit/rater.hpp"

#include "feedaudit/rng.hpp"

namespace feedaudit {

OracleRater::OracleRater(std::string rater_id, double noise_rate, std::uint64_t seed)
    : rater_id_(std::move(rater_id)), noise_rate_(noise_rate), seed_(seed) {
    if (noise_rate < 0.0 || noise_rate > 1.0)
        throw InvalidSpec("OracleRater noise rate outside [0,1]");
}

ClassifierVerdict OracleRater::classify(const VideoRecord& video, Question question) {
    Rng rng(mix_seed(seed_, fnv1a64(rater_id_) ^ static_cast<std::uint64_t>(question),
                     fnv1a64(video.video_id)));
    const bool flip = rng.uniform() < noise_rate_;
    switch (question) {
        case Question::Q1Political:
            return ClassifierVerdict::yes_no(rater_id_, question,
                                             flip ? !video.is_political : video.is_political);
        case Question::Q2Election:
            return ClassifierVerdict::yes_no(
                rater_id_, question, flip ? !video.is_election_related : video.is_election_related);
        case Question::Q3Stance:
        case Question::CommentStance: {
            const StanceLabel truth = video.stance.value_or(StanceLabel::Neutral);
            if (!flip) return ClassifierVerdict::stance_of(rater_id_, question, truth);
            // symmetric noise: uniform over the four other categories
            auto shift = 1 + static_cast<int>(rng.below(kNumStances - 1));
            const int noisy = (static_cast<int>(truth) + shift) % kNumStances;
            return ClassifierVerdict::stance_of(rater_id_, question,
                                                static_cast<StanceLabel>(noisy));
        }
    }
    throw std::logic_error("OracleRater::classify: unreachable");
}

EnsembleLabeler::EnsembleLabeler(std::vector<std::unique_ptr<ClassifierBackend>> raters,
                                 EnsemblePolicy policy)
    : raters_(std::move(raters)), policy_(std::move(policy)) {
    if (raters_.empty()) throw InvalidSpec("EnsembleLabeler needs at least one rater");
}

LabeledVideo EnsembleLabeler::label(const VideoRecord& video) {
    LabeledVideo out;
    out.video_id = video.video_id;

    std::vector<ClassifierVerdict> verdicts;
    verdicts.reserve(raters_.size());
    for (auto& r : raters_) verdicts.push_back(r->classify(video, Question::Q1Political));
    out.is_political = *ensemble_vote(verdicts, policy_).binary;
    if (!out.is_political) return out;

    verdicts.clear();
    for (auto& r : raters_) verdicts.push_back(r->classify(video, Question::Q2Election));
    out.is_election_related = *ensemble_vote(verdicts, policy_).binary;

    verdicts.clear();
    for (auto& r : raters_) verdicts.push_back(r->classify(video, Question::Q3Stance));
    const auto vote = ensemble_vote(verdicts, policy_);
    if (vote.stance.has_value())
        out.stance = vote.stance;
    else
        out.unresolved_stance = true;
    return out;
}

std::vector<LabeledVideo> EnsembleLabeler::label_all(const std::vector<VideoRecord>& videos,
                                                     RaterAnswerSheets* sheets) {
    std::vector<LabeledVideo> out;
    out.reserve(videos.size());
    if (sheets != nullptr) {
        sheets->rater_ids.clear();
        for (auto& r : raters_) sheets->rater_ids.push_back(r->rater_id());
        sheets->q1.assign(raters_.size(), {});
        sheets->q2.assign(raters_.size(), {});
        sheets->q3.assign(raters_.size(), {});
    }
    for (const auto& video : videos) {
        LabeledVideo labeled = label(video);
        if (sheets != nullptr) {
            for (std::size_t r = 0; r < raters_.size(); ++r) {
                const auto q1 = raters_[r]->classify(video, Question::Q1Political);
                sheets->q1[r].push_back(*q1.binary ? 1 : 0);
            }
            if (labeled.is_political) {
                for (std::size_t r = 0; r < raters_.size(); ++r) {
                    const auto q2 = raters_[r]->classify(video, Question::Q2Election);
                    sheets->q2[r].push_back(*q2.binary ? 1 : 0);
                    const auto q3 = raters_[r]->classify(video, Question::Q3Stance);
                    sheets->q3[r].push_back(static_cast<int>(*q3.stance));
                }
            }
        }
        out.push_back(std::move(labeled));
    }
    return out;
}

EnsembleLabeler make_oracle_labeler(double noise_rate, std::uint64_t seed, int n_raters) {
    if (n_raters < 1) throw InvalidSpec("labeler needs at least one rater");
    std::vector<std::unique_ptr<ClassifierBackend>> raters;
    raters.reserve(static_cast<std::size_t>(n_raters));
    for (int i = 0; i < n_raters; ++i)
        raters.push_back(std::make_unique<OracleRater>("rater" + std::to_string(i), noise_rate,
                                                       mix_seed(seed, 0x7261746572ULL, i)));
    EnsemblePolicy policy;
    policy.n_raters = n_raters;
    policy.binary_tiebreaker_rater = "rater" + std::to_string(n_raters - 1);
    return EnsembleLabeler(std::move(raters), policy);
}

}  // namespace feedaudit
