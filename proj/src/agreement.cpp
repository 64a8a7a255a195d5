#include "feedaudit/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "feedaudit/stats.hpp"

namespace feedaudit {

AgreementMetric agreement_metric_from_string(const std::string& s) {
    if (s == "FleissKappa") return AgreementMetric::FleissKappa;
    if (s == "KrippendorffAlphaNominal") return AgreementMetric::KrippendorffAlphaNominal;
    if (s == "CohenKappa") return AgreementMetric::CohenKappa;
    if (s == "Accuracy") return AgreementMetric::Accuracy;
    if (s == "F1Macro") return AgreementMetric::F1Macro;
    throw ConfigError("unknown agreement metric: " + s);
}

std::string to_string(AgreementMetric m) {
    switch (m) {
        case AgreementMetric::FleissKappa: return "FleissKappa";
        case AgreementMetric::KrippendorffAlphaNominal: return "KrippendorffAlphaNominal";
        case AgreementMetric::CohenKappa: return "CohenKappa";
        case AgreementMetric::Accuracy: return "Accuracy";
        case AgreementMetric::F1Macro: return "F1Macro";
    }
    return "?";
}

namespace {

void check_ratings_shape(const RatingsMatrix& ratings) {
    if (ratings.size() < 2) throw InsufficientData("agreement needs at least two raters");
    if (ratings.front().empty()) throw InsufficientData("agreement needs at least one item");
    for (const auto& row : ratings)
        if (row.size() != ratings.front().size())
            throw InsufficientData("ratings matrix is ragged");
}

int max_category(const RatingsMatrix& ratings) {
    int mx = -1;
    for (const auto& row : ratings)
        for (int v : row) mx = std::max(mx, v);
    if (mx < 0) throw InsufficientData("no ratings present");
    return mx;
}

}  // namespace

double fleiss_kappa(const RatingsMatrix& ratings) {
    check_ratings_shape(ratings);
    const std::size_t raters = ratings.size();
    const std::size_t items = ratings.front().size();
    for (const auto& row : ratings)
        for (int v : row)
            if (v == kMissingRating) throw MissingRatings("Fleiss kappa rejects missing ratings");

    const int k = max_category(ratings) + 1;
    const double n = static_cast<double>(raters);

    std::vector<double> pj(static_cast<std::size_t>(k), 0.0);
    double pbar = 0.0;
    for (std::size_t i = 0; i < items; ++i) {
        std::vector<double> counts(static_cast<std::size_t>(k), 0.0);
        for (std::size_t r = 0; r < raters; ++r) counts[static_cast<std::size_t>(ratings[r][i])] += 1.0;
        double agree = 0.0;
        for (int c = 0; c < k; ++c) {
            agree += counts[static_cast<std::size_t>(c)] * counts[static_cast<std::size_t>(c)];
            pj[static_cast<std::size_t>(c)] += counts[static_cast<std::size_t>(c)];
        }
        pbar += (agree - n) / (n * (n - 1.0));
    }
    pbar /= static_cast<double>(items);
    double pe = 0.0;
    for (double c : pj) {
        const double p = c / (n * static_cast<double>(items));
        pe += p * p;
    }
    if (1.0 - pe <= 0.0)
        throw DegenerateAgreement("Fleiss kappa undefined: raters constant in one category");
    return (pbar - pe) / (1.0 - pe);
}

double krippendorff_alpha_nominal(const RatingsMatrix& ratings) {
    check_ratings_shape(ratings);
    const std::size_t raters = ratings.size();
    const std::size_t items = ratings.front().size();

    // coincidence matrix over pairable values
    std::map<std::pair<int, int>, double> coincidence;
    std::map<int, double> totals;
    double n_pairable = 0.0;
    for (std::size_t i = 0; i < items; ++i) {
        std::vector<int> vals;
        for (std::size_t r = 0; r < raters; ++r)
            if (ratings[r][i] != kMissingRating) vals.push_back(ratings[r][i]);
        const auto m = static_cast<double>(vals.size());
        if (m < 2) continue;
        for (std::size_t a = 0; a < vals.size(); ++a)
            for (std::size_t b = 0; b < vals.size(); ++b)
                if (a != b) coincidence[{vals[a], vals[b]}] += 1.0 / (m - 1.0);
    }
    for (const auto& [key, c] : coincidence) totals[key.first] += c;
    for (const auto& [cat, c] : totals) n_pairable += c;
    if (n_pairable < 2.0) throw InsufficientData("Krippendorff alpha: no pairable values");

    double d_observed = 0.0;
    for (const auto& [key, c] : coincidence)
        if (key.first != key.second) d_observed += c;
    double d_expected = 0.0;
    for (const auto& [a, ca] : totals)
        for (const auto& [b, cb] : totals)
            if (a != b) d_expected += ca * cb;
    d_expected /= (n_pairable - 1.0);
    if (d_expected <= 0.0)
        throw DegenerateAgreement("Krippendorff alpha undefined: a single category present");
    return 1.0 - d_observed / d_expected;
}

namespace {

void check_confusion(const ConfusionMatrix& m) {
    if (m.empty()) throw InsufficientData("empty confusion matrix");
    for (const auto& row : m) {
        if (row.size() != m.size()) throw InsufficientData("confusion matrix must be square");
        for (double v : row)
            if (v < 0.0) throw DataError("negative confusion count");
    }
}

double total_of(const ConfusionMatrix& m) {
    double t = 0.0;
    for (const auto& row : m)
        for (double v : row) t += v;
    if (t <= 0.0) throw InsufficientData("confusion matrix has no observations");
    return t;
}

}  // namespace

double cohen_kappa(const ConfusionMatrix& confusion) {
    check_confusion(confusion);
    const double total = total_of(confusion);
    const std::size_t k = confusion.size();
    double po = 0.0, pe = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        po += confusion[c][c];
        double row = 0.0, col = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            row += confusion[c][j];
            col += confusion[j][c];
        }
        pe += (row / total) * (col / total);
    }
    po /= total;
    if (1.0 - pe <= 0.0)
        throw DegenerateAgreement("Cohen kappa undefined: marginals concentrated in one category");
    return (po - pe) / (1.0 - pe);
}

double accuracy(const ConfusionMatrix& confusion) {
    check_confusion(confusion);
    const double total = total_of(confusion);
    double diag = 0.0;
    for (std::size_t c = 0; c < confusion.size(); ++c) diag += confusion[c][c];
    return diag / total;
}

double f1_macro(const ConfusionMatrix& confusion) {
    check_confusion(confusion);
    total_of(confusion);
    const std::size_t k = confusion.size();
    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        double tp = confusion[c][c], pred = 0.0, actual = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            pred += confusion[j][c];
            actual += confusion[c][j];
        }
        const double denom = pred + actual;  // F1 = 2tp / (pred + actual)
        sum += denom > 0.0 ? 2.0 * tp / denom : 0.0;
    }
    return sum / static_cast<double>(k);
}

double agreement(AgreementMetric metric, const std::vector<std::vector<double>>& matrix) {
    switch (metric) {
        case AgreementMetric::FleissKappa:
        case AgreementMetric::KrippendorffAlphaNominal: {
            RatingsMatrix ratings(matrix.size());
            for (std::size_t r = 0; r < matrix.size(); ++r) {
                ratings[r].reserve(matrix[r].size());
                for (double v : matrix[r]) ratings[r].push_back(static_cast<int>(std::lround(v)));
            }
            return metric == AgreementMetric::FleissKappa ? fleiss_kappa(ratings)
                                                          : krippendorff_alpha_nominal(ratings);
        }
        case AgreementMetric::CohenKappa: return cohen_kappa(matrix);
        case AgreementMetric::Accuracy: return accuracy(matrix);
        case AgreementMetric::F1Macro: return f1_macro(matrix);
    }
    throw std::logic_error("agreement: unreachable");
}

}  // namespace feedaudit
