#pragma once

#include <memory>
#include <vector>

#include "feedaudit/agreement.hpp"
#include "feedaudit/core.hpp"
#include "feedaudit/ensemble.hpp"

namespace feedaudit {

// One-call classifier backend: item in, verdict out. Real model clients
// would implement this; the toolkit ships a ground-truth-reading rater with
// configurable symmetric label noise for pipeline validation.
class ClassifierBackend {
public:
    virtual ~ClassifierBackend() = default;
    virtual const std::string& rater_id() const = 0;
    virtual ClassifierVerdict classify(const VideoRecord& video, Question question) = 0;
};

// Deterministic per (seed, rater, video, question): labeling order and
// worker layout cannot change the verdicts.
class OracleRater final : public ClassifierBackend {
public:
    OracleRater(std::string rater_id, double noise_rate, std::uint64_t seed);

    const std::string& rater_id() const override { return rater_id_; }
    ClassifierVerdict classify(const VideoRecord& video, Question question) override;

private:
    std::string rater_id_;
    double noise_rate_;
    std::uint64_t seed_;
};

struct LabeledVideo {
    std::string video_id;
    bool is_political = false;
    bool is_election_related = false;
    std::optional<StanceLabel> stance;  // absent: not political or unresolved
    bool unresolved_stance = false;     // political but no five-way majority
};

// Per-question rater answers across the labeled corpus, for the agreement
// reports (rows = raters, columns = items, codes per question).
struct RaterAnswerSheets {
    std::vector<std::string> rater_ids;
    RatingsMatrix q1;  // 0/1
    RatingsMatrix q2;  // 0/1, only videos the ensemble called political
    RatingsMatrix q3;  // stance codes, only videos the ensemble called political
};

// The three-question pipeline: every rater answers Q1; Q2/Q3 are asked only
// when the ensemble majority on Q1 is Yes.
class EnsembleLabeler {
public:
    EnsembleLabeler(std::vector<std::unique_ptr<ClassifierBackend>> raters, EnsemblePolicy policy);

    LabeledVideo label(const VideoRecord& video);
    std::vector<LabeledVideo> label_all(const std::vector<VideoRecord>& videos,
                                        RaterAnswerSheets* sheets = nullptr);

private:
    std::vector<std::unique_ptr<ClassifierBackend>> raters_;
    EnsemblePolicy policy_;
};

// Three oracle raters with independent noise streams; the third is the
// designated binary tiebreaker.
EnsembleLabeler make_oracle_labeler(double noise_rate, std::uint64_t seed, int n_raters = 3);

}  // namespace feedaudit
