#pragma once

#include <optional>
#include <span>
#include <string>

#include "feedaudit/core.hpp"

namespace feedaudit {

struct MixedQuestions : DataError {
    using DataError::DataError;
};
struct MissingTiebreaker : DataError {
    using DataError::DataError;
};

enum class Question : std::uint8_t { Q1Political, Q2Election, Q3Stance, CommentStance };

std::string to_string(Question q);

// One rater's answer; binary questions fill `binary`, stance questions fill
// `stance`. The factory helpers keep answer arity matched to the question.
struct ClassifierVerdict {
    std::string rater_id;
    Question question = Question::Q1Political;
    std::optional<bool> binary;
    std::optional<StanceLabel> stance;

    static ClassifierVerdict yes_no(std::string rater, Question q, bool answer);
    static ClassifierVerdict stance_of(std::string rater, Question q, StanceLabel answer);
};

enum class FiveCategoryRule : std::uint8_t { StrictMajority };

struct EnsemblePolicy {
    int n_raters = 3;
    std::string binary_tiebreaker_rater;  // consulted only on exact binary ties
    FiveCategoryRule fivecat_rule = FiveCategoryRule::StrictMajority;
};

struct VoteResult {
    Question question = Question::Q1Political;
    std::optional<bool> binary;
    std::optional<StanceLabel> stance;

    // five-category votes without a strict majority stay unresolved
    bool resolved() const { return binary.has_value() || stance.has_value(); }
};

// Binary questions: majority among non-tiebreaker raters; an exact tie is
// decided by the designated tiebreaker's own verdict. Five-category
// questions: the label with strictly more than half of all votes, otherwise
// Unresolved; the tiebreaker votes like any other rater here.
VoteResult ensemble_vote(std::span<const ClassifierVerdict> verdicts, const EnsemblePolicy& policy);

}  // namespace feedaudit
