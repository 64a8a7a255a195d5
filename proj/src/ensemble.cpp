#include "feedaudit/ensemble.hpp"

#include <array>
#include <unordered_set>

namespace feedaudit {

std::string to_string(Question q) {
    switch (q) {
        case Question::Q1Political: return "Q1_political";
        case Question::Q2Election: return "Q2_election";
        case Question::Q3Stance: return "Q3_stance";
        case Question::CommentStance: return "Comment_stance";
    }
    return "?";
}

static bool is_binary(Question q) {
    return q == Question::Q1Political || q == Question::Q2Election;
}

ClassifierVerdict ClassifierVerdict::yes_no(std::string rater, Question q, bool answer) {
    if (!is_binary(q)) throw DataError("yes/no answer on a stance question");
    ClassifierVerdict v;
    v.rater_id = std::move(rater);
    v.question = q;
    v.binary = answer;
    return v;
}

ClassifierVerdict ClassifierVerdict::stance_of(std::string rater, Question q, StanceLabel answer) {
    if (is_binary(q)) throw DataError("stance answer on a yes/no question");
    ClassifierVerdict v;
    v.rater_id = std::move(rater);
    v.question = q;
    v.stance = answer;
    return v;
}

VoteResult ensemble_vote(std::span<const ClassifierVerdict> verdicts,
                         const EnsemblePolicy& policy) {
    if (verdicts.empty()) throw DataError("ensemble_vote: no verdicts");
    const Question q = verdicts.front().question;
    std::unordered_set<std::string> seen;
    for (const auto& v : verdicts) {
        if (v.question != q) throw MixedQuestions("verdicts answer different questions");
        if (!seen.insert(v.rater_id).second)
            throw DataError("duplicate rater in ensemble: " + v.rater_id);
        if (is_binary(q) != v.binary.has_value())
            throw DataError("verdict arity does not match question");
    }

    VoteResult result;
    result.question = q;

    if (is_binary(q)) {
        int yes = 0, no = 0;
        std::optional<bool> tiebreak_answer;
        for (const auto& v : verdicts) {
            if (v.rater_id == policy.binary_tiebreaker_rater) {
                tiebreak_answer = v.binary;
                continue;
            }
            (*v.binary ? yes : no)++;
        }
        if (yes == 0 && no == 0 && tiebreak_answer.has_value()) {
            // nothing but the tiebreaker voted; its verdict stands
            result.binary = tiebreak_answer;
            return result;
        }
        if (yes != no) {
            result.binary = yes > no;
            return result;
        }
        if (!tiebreak_answer.has_value())
            throw MissingTiebreaker("binary tie with no tiebreaker verdict for rater '" +
                                    policy.binary_tiebreaker_rater + "'");
        result.binary = *tiebreak_answer;
        return result;
    }

    // five-category strict majority over all raters
    std::array<int, kNumStances> counts{};
    for (const auto& v : verdicts) counts[static_cast<std::size_t>(*v.stance)]++;
    const int total = static_cast<int>(verdicts.size());
    for (int s = 0; s < kNumStances; ++s) {
        if (2 * counts[static_cast<std::size_t>(s)] > total) {
            result.stance = static_cast<StanceLabel>(s);
            return result;
        }
    }
    return result;  // unresolved
}

}  // namespace feedaudit
