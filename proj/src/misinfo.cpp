#include "feedaudit/misinfo.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "feedaudit/rng.hpp"

namespace feedaudit {

HashedBagEmbedder::HashedBagEmbedder(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw InvalidSpec("embedder dimension must be positive");
}

EmbeddingVector HashedBagEmbedder::embed(const std::string& text) const {
    if (text.empty()) throw EmptyText("cannot embed empty text");
    EmbeddingVector vec;
    vec.values.assign(dim_, 0.0);

    std::string token;
    bool any_token = false;
    auto flush = [&] {
        if (token.empty()) return;
        vec.values[fnv1a64(token) % dim_] += 1.0;
        any_token = true;
        token.clear();
    };
    for (char c : text) {
        const auto u = static_cast<unsigned char>(c);
        if (std::isalnum(u) || c == '\'')
            token.push_back(static_cast<char>(std::tolower(u)));
        else
            flush();
    }
    flush();
    if (!any_token) throw EmptyText("text contains no tokens");

    double norm = 0.0;
    for (double v : vec.values) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : vec.values) v /= norm;
    return vec;
}

double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v) {
    if (u.dim() != v.dim())
        throw DimMismatch("cosine over vectors of dim " + std::to_string(u.dim()) + " and " +
                          std::to_string(v.dim()));
    if (u.values == v.values) {
        double norm = 0.0;
        for (double x : u.values) norm += x * x;
        if (norm == 0.0) throw ZeroVector("cosine of a zero vector");
        return 1.0;  // identical inputs are exactly parallel
    }
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.dim(); ++i) {
        dot += u.values[i] * v.values[i];
        nu += u.values[i] * u.values[i];
        nv += v.values[i] * v.values[i];
    }
    if (nu == 0.0 || nv == 0.0) throw ZeroVector("cosine of a zero vector");
    return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

HeadlineCorpus load_corpus(const std::filesystem::path& path,
                           const std::set<std::string>& accepted_ratings) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open corpus: " + path.string());
    HeadlineCorpus corpus;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.front() == '#') continue;
        const auto tab1 = line.find('\t');
        if (tab1 == std::string::npos)
            throw DataError("corpus line " + std::to_string(lineno) + " has no tab separator");
        Headline h;
        h.text = line.substr(0, tab1);
        const auto tab2 = line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos) {
            h.rating = line.substr(tab1 + 1);
        } else {
            h.rating = line.substr(tab1 + 1, tab2 - tab1 - 1);
            h.source = line.substr(tab2 + 1);
        }
        if (h.text.empty())
            throw DataError("corpus line " + std::to_string(lineno) + " has an empty headline");
        if (accepted_ratings.contains(h.rating)) corpus.headlines.push_back(std::move(h));
    }
    return corpus;
}

MisinfoReport misinfo_report(std::span<const StancedTranscript> transcripts,
                             const HeadlineCorpus& corpus, std::vector<double> thresholds,
                             const EmbeddingProvider& provider) {
    if (thresholds.empty()) throw InvalidSpec("misinfo report needs at least one threshold");
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (thresholds[i] < -1.0 || thresholds[i] > 1.0)
            throw InvalidSpec("misinfo threshold outside [-1,1]");
        if (i > 0 && thresholds[i] <= thresholds[i - 1])
            throw InvalidSpec("misinfo thresholds must be strictly ascending");
    }

    std::vector<EmbeddingVector> headline_vecs;
    headline_vecs.reserve(corpus.headlines.size());
    for (const auto& h : corpus.headlines) headline_vecs.push_back(provider.embed(h.text));

    MisinfoReport report;
    report.thresholds = thresholds;
    report.by_stance.assign(kNumStances, std::vector<MisinfoCell>(thresholds.size()));
    report.transcripts_per_stance.assign(kNumStances, 0);

    for (const auto& t : transcripts) {
        const auto stance_idx = static_cast<std::size_t>(t.stance);
        ++report.transcripts_per_stance[stance_idx];
        const auto vec = provider.embed(t.text);
        double best = -1.0;
        for (const auto& hv : headline_vecs) best = std::max(best, cosine_similarity(vec, hv));
        for (std::size_t k = 0; k < thresholds.size(); ++k)
            if (best >= thresholds[k]) ++report.by_stance[stance_idx][k].matches;
    }
    for (int s = 0; s < kNumStances; ++s) {
        const auto n = report.transcripts_per_stance[static_cast<std::size_t>(s)];
        for (auto& cell : report.by_stance[static_cast<std::size_t>(s)])
            cell.percent = n > 0 ? 100.0 * static_cast<double>(cell.matches) /
                                       static_cast<double>(n)
                                 : 0.0;
    }
    return report;
}

}  // namespace feedaudit
