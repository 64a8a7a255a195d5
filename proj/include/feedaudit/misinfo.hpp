#pragma once

#include <filesystem>
#include <memory>
#include <set>
#include <span>
#include <vector>

#include "feedaudit/core.hpp"

namespace feedaudit {

struct EmptyText : DataError {
    using DataError::DataError;
};
struct ZeroVector : DataError {
    using DataError::DataError;
};
struct DimMismatch : DataError {
    using DataError::DataError;
};

struct EmbeddingVector {
    std::vector<double> values;
    std::size_t dim() const { return values.size(); }
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual EmbeddingVector embed(const std::string& text) const = 0;
};

// Deterministic test provider: lowercase alphanumeric tokens hashed into a
// fixed number of buckets, L2-normalized. No network, no model weights.
class HashedBagEmbedder final : public EmbeddingProvider {
public:
    explicit HashedBagEmbedder(std::size_t dim = 256);
    EmbeddingVector embed(const std::string& text) const override;

private:
    std::size_t dim_;
};

double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v);

struct Headline {
    std::string text;
    std::string source;
    std::string rating;
};

struct HeadlineCorpus {
    std::vector<Headline> headlines;
};

// Tab-separated headline file: headline<TAB>rating[<TAB>source]. Lines with
// ratings outside the accepted set are skipped.
HeadlineCorpus load_corpus(const std::filesystem::path& path,
                           const std::set<std::string>& accepted_ratings = {
                               "False", "Mostly False", "Unproven", "Fake", "Unfounded",
                               "Pants-on-fire"});

struct StancedTranscript {
    std::string text;
    StanceLabel stance = StanceLabel::Neutral;
};

struct MisinfoCell {
    std::int64_t matches = 0;
    double percent = 0.0;
};

struct MisinfoReport {
    std::vector<double> thresholds;
    // one row per stance in enum order: counts and percentages per threshold
    std::vector<std::vector<MisinfoCell>> by_stance;
    std::vector<std::int64_t> transcripts_per_stance;
};

// A transcript matches at threshold t when its best headline cosine
// similarity reaches t; match counts are non-increasing in t by definition.
MisinfoReport misinfo_report(std::span<const StancedTranscript> transcripts,
                             const HeadlineCorpus& corpus, std::vector<double> thresholds,
                             const EmbeddingProvider& provider);

}  // namespace feedaudit
