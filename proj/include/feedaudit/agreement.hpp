#pragma once

#include <string>
#include <vector>

#include "feedaudit/core.hpp"

namespace feedaudit {

struct DegenerateAgreement : DataError {
    using DataError::DataError;
};
struct MissingRatings : DataError {
    using DataError::DataError;
};

enum class AgreementMetric : std::uint8_t {
    FleissKappa,
    KrippendorffAlphaNominal,
    CohenKappa,
    Accuracy,
    F1Macro,
};

AgreementMetric agreement_metric_from_string(const std::string& s);
std::string to_string(AgreementMetric m);

// ratings[rater][item]: non-negative category codes, kMissingRating = absent.
inline constexpr int kMissingRating = -1;
using RatingsMatrix = std::vector<std::vector<int>>;
// confusion[a][b]: items rater A coded a and rater B coded b (or truth/prediction).
using ConfusionMatrix = std::vector<std::vector<double>>;

// Fleiss' kappa; missing cells are rejected (use Krippendorff's alpha for
// incomplete designs).
double fleiss_kappa(const RatingsMatrix& ratings);

// Krippendorff's alpha for nominal data via the coincidence matrix; tolerates
// missing ratings, items with fewer than two ratings drop out.
double krippendorff_alpha_nominal(const RatingsMatrix& ratings);

double cohen_kappa(const ConfusionMatrix& confusion);
double accuracy(const ConfusionMatrix& confusion);
// Macro average over every class in the matrix; a class with no predictions
// and no support contributes 0, matching common tooling.
double f1_macro(const ConfusionMatrix& confusion);

// Single entry point: Fleiss/Krippendorff read the matrix as raters x items,
// the pairwise metrics read it as a confusion matrix.
double agreement(AgreementMetric metric, const std::vector<std::vector<double>>& matrix);

}  // namespace feedaudit
