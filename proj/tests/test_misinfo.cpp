#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>

#include "feedaudit/misinfo.hpp"
#include "feedaudit/rng.hpp"

using namespace feedaudit;

TEST_CASE("embedding is deterministic, unit norm, and token-hash based") {
    const HashedBagEmbedder embedder;
    const auto a = embedder.embed("The quick brown fox jumps over the lazy dog");
    const auto b = embedder.embed("The quick brown fox jumps over the lazy dog");
    CHECK(a.values == b.values);

    double norm = 0.0;
    for (double v : a.values) norm += v * v;
    CHECK(std::fabs(std::sqrt(norm) - 1.0) < 1e-12);

    CHECK_THROWS_AS(embedder.embed(""), EmptyText);
    CHECK_THROWS_AS(embedder.embed("   ...!!!   "), EmptyText);
}

TEST_CASE("disjoint-token texts are orthogonal under the bag embedder") {
    const HashedBagEmbedder embedder(4096);  // wide enough to dodge bucket collisions here
    const auto a = embedder.embed("alpha bravo charlie");
    const auto b = embedder.embed("delta echo foxtrot");
    CHECK(cosine_similarity(a, b) == doctest::Approx(0.0).scale(1).epsilon(1e-12));
}

TEST_CASE("cosine similarity basics") {
    const EmbeddingVector u{{1.0, 2.0, 3.0}};
    const EmbeddingVector v{{4.0, 5.0, 6.0}};
    CHECK(cosine_similarity(u, u) == 1.0);
    CHECK(cosine_similarity(u, v) == doctest::Approx(0.974632).epsilon(1e-6));

    const EmbeddingVector e1{{1.0, 0.0}};
    const EmbeddingVector e2{{0.0, 1.0}};
    CHECK(cosine_similarity(e1, e2) == 0.0);

    const EmbeddingVector zero{{0.0, 0.0}};
    CHECK_THROWS_AS(cosine_similarity(e1, zero), ZeroVector);
    const EmbeddingVector wide{{1.0, 2.0, 3.0, 4.0}};
    CHECK_THROWS_AS(cosine_similarity(u, wide), DimMismatch);
}

TEST_CASE("cosine is symmetric and scale invariant to 1e-12") {
    Rng rng(91);
    for (int t = 0; t < 20; ++t) {
        EmbeddingVector u, v;
        for (int i = 0; i < 16; ++i) {
            u.values.push_back(rng.normal());
            v.values.push_back(rng.normal());
        }
        const double s = cosine_similarity(u, v);
        CHECK(cosine_similarity(v, u) == doctest::Approx(s).epsilon(1e-12));
        EmbeddingVector scaled = u;
        for (auto& x : scaled.values) x *= 3.25;
        CHECK(cosine_similarity(scaled, v) == doctest::Approx(s).epsilon(1e-12));
        CHECK(s >= -1.0);
        CHECK(s <= 1.0);
    }
}

namespace {

HeadlineCorpus tiny_corpus() {
    HeadlineCorpus corpus;
    corpus.headlines.push_back({"moon landing staged in a basement studio", "test", "False"});
    corpus.headlines.push_back({"vaccine contains tracking chips", "test", "False"});
    corpus.headlines.push_back({"election ballots were printed abroad twice", "test", "Fake"});
    return corpus;
}

}  // namespace

TEST_CASE("identical transcript matches at every threshold including 1.0") {
    const HashedBagEmbedder embedder;
    const auto corpus = tiny_corpus();
    const std::vector<StancedTranscript> transcripts{
        {"moon landing staged in a basement studio", StanceLabel::Neutral}};
    const auto report =
        misinfo_report(transcripts, corpus, {0.6, 0.7, 0.8, 0.9, 1.0}, embedder);
    const auto& row = report.by_stance[static_cast<std::size_t>(StanceLabel::Neutral)];
    for (const auto& cell : row) {
        CHECK(cell.matches == 1);
        CHECK(cell.percent == doctest::Approx(100.0));
    }
}

TEST_CASE("match counts are monotone non-increasing in the threshold") {
    const HashedBagEmbedder embedder;
    const auto corpus = tiny_corpus();
    Rng rng(92);
    const char* words[] = {"moon",  "landing", "studio", "vaccine", "chips",
                           "quiet", "river",   "ballots", "printed", "garden"};
    std::vector<StancedTranscript> transcripts;
    for (int i = 0; i < 60; ++i) {
        std::string text;
        const int len = 3 + static_cast<int>(rng.below(6));
        for (int k = 0; k < len; ++k) {
            text += words[rng.below(10)];
            text += ' ';
        }
        transcripts.push_back({text, static_cast<StanceLabel>(rng.below(kNumStances))});
    }
    const auto report = misinfo_report(transcripts, corpus, {0.2, 0.4, 0.6, 0.8}, embedder);
    for (const auto& row : report.by_stance)
        for (std::size_t k = 1; k < row.size(); ++k) CHECK(row[k].matches <= row[k - 1].matches);

    // deterministic: same inputs, same report
    const auto again = misinfo_report(transcripts, corpus, {0.2, 0.4, 0.6, 0.8}, embedder);
    for (std::size_t s = 0; s < report.by_stance.size(); ++s)
        for (std::size_t k = 0; k < report.by_stance[s].size(); ++k)
            CHECK(report.by_stance[s][k].matches == again.by_stance[s][k].matches);
}

TEST_CASE("threshold validation") {
    const HashedBagEmbedder embedder;
    const auto corpus = tiny_corpus();
    const std::vector<StancedTranscript> transcripts{{"hello world", StanceLabel::Neutral}};
    CHECK_THROWS_AS(misinfo_report(transcripts, corpus, {}, embedder), InvalidSpec);
    CHECK_THROWS_AS(misinfo_report(transcripts, corpus, {0.8, 0.6}, embedder), InvalidSpec);
    CHECK_THROWS_AS(misinfo_report(transcripts, corpus, {0.5, 1.5}, embedder), InvalidSpec);
}

TEST_CASE("corpus loads from tab-separated text and filters by rating") {
    const auto path = std::filesystem::temp_directory_path() / "feedaudit_corpus_test.tsv";
    {
        std::ofstream out(path);
        out << "# comment line\n";
        out << "headline one\tFalse\tsnopes\n";
        out << "headline two\tTrue\tsnopes\n";  // filtered out
        out << "headline three\tPants-on-fire\n";
    }
    const auto corpus = load_corpus(path);
    REQUIRE(corpus.headlines.size() == 2);
    CHECK(corpus.headlines[0].text == "headline one");
    CHECK(corpus.headlines[0].source == "snopes");
    CHECK(corpus.headlines[1].rating == "Pants-on-fire");
    std::filesystem::remove(path);
}
