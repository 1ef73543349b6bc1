#include "prominence/semsimrank.hpp"

#include "prominence/error.hpp"
#include "prominence/random.hpp"

#include <algorithm>
#include <cmath>

namespace prominence {

SimilarityMatrix::SimilarityMatrix(std::size_t size, std::vector<double> row_major, bool normalized)
    : size_(size), weights_(std::move(row_major)), normalized_(normalized) {
    if (weights_.size() != size_ * size_) {
        throw ValidationError("similarity matrix needs " + std::to_string(size_ * size_) + " entries, got " +
                              std::to_string(weights_.size()));
    }
}

void RankConfig::validate() const {
    if (!(damping > 0.0 && damping < 1.0)) throw ValidationError("damping must lie in (0, 1)");
    if (max_iterations < 1) throw ValidationError("max_iterations must be at least 1");
    if (!(convergence_threshold > 0.0)) throw ValidationError("convergence threshold must be positive");
    if (top_n < 1) throw ValidationError("top_n must be at least 1");
}

SimilarityMatrix build_graph(const Document& doc, SimilarityMethod method, const SimilarityContext& context) {
    const std::size_t n = doc.sentences.size();
    if (n == 0) throw ValidationError("document " + doc.id + " has no sentences");
    const SentenceEncoder encoder(method, context);
    std::vector<SentenceEncoder::Encoded> encoded;
    encoded.reserve(n);
    for (std::size_t i = 0; i < n; ++i) encoded.push_back(encoder.encode(SentenceRef{&doc, i}));

    SimilarityMatrix e(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double w = encoder.similarity(encoded[i], encoded[j]);
            e(i, j) = w;
            e(j, i) = w;
        }
    }
    return e;
}

SimilarityMatrix row_normalize(const SimilarityMatrix& matrix) {
    const std::size_t n = matrix.size();
    SimilarityMatrix out = matrix;
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (double w : matrix.row(i)) sum += w;
        for (std::size_t j = 0; j < n; ++j) {
            if (sum > 0.0) {
                out(i, j) = matrix(i, j) / sum;
            } else {
                // dangling row
                out(i, j) = (j == i || n < 2) ? 0.0 : 1.0 / static_cast<double>(n - 1);
            }
        }
    }
    out.mark_normalized();
    return out;
}

RankVector pagerank(const SimilarityMatrix& normalized, const RankConfig& config) {
    config.validate();
    if (!normalized.normalized()) throw ValidationError("pagerank expects a row-normalized matrix");
    const std::size_t n = normalized.size();
    RankVector result;
    if (n == 0) {
        result.converged = true;
        return result;
    }
    if (n == 1) {
        result.scores = {1.0};
        result.converged = true;
        return result;
    }

    const double sz = static_cast<double>(n);
    const double teleport = (1.0 - config.damping) / sz;
    std::vector<double> p(n, 1.0 / sz);
    std::vector<double> next(n);
    while (result.iterations_used < config.max_iterations) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const auto row = normalized.row(j);
            for (std::size_t i = 0; i < n; ++i) next[i] += row[i] * p[j];
        }
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = teleport + config.damping * next[i];
            change += std::abs(next[i] - p[i]);
        }
        p.swap(next);
        ++result.iterations_used;
        if (change < config.convergence_threshold) {
            result.converged = true;
            break;
        }
    }
    // Remove floating drift so the scores sum to one.
    double total = 0.0;
    for (double x : p) total += x;
    for (double& x : p) x /= total;
    result.scores = std::move(p);
    return result;
}

std::vector<RankedSentence> order_by_score(const std::vector<double>& scores) {
    std::vector<RankedSentence> order;
    order.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) order.push_back({i, scores[i]});
    std::stable_sort(order.begin(), order.end(),
                     [](const RankedSentence& a, const RankedSentence& b) { return a.score > b.score; });
    return order;
}

Ranking rank_sentences(const Document& doc, SimilarityMethod method, const SimilarityContext& context,
                       const RankConfig& config) {
    Ranking r;
    r.rank = pagerank(row_normalize(build_graph(doc, method, context)), config);
    r.order = order_by_score(r.rank.scores);
    return r;
}

std::vector<std::size_t> select_top_n(const std::vector<RankedSentence>& ranking, std::size_t n) {
    if (n < 1) throw ValidationError("top_n must be at least 1");
    std::vector<std::size_t> out;
    const std::size_t k = std::min(n, ranking.size());
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back(ranking[i].index);
    return out;
}

std::size_t first_sentence_baseline(const Document& doc) {
    if (doc.sentences.empty()) throw ValidationError("document " + doc.id + " has no sentences");
    return 0;
}

std::size_t random_sentence_baseline(const Document& doc, std::uint64_t seed) {
    if (doc.sentences.empty()) throw ValidationError("document " + doc.id + " has no sentences");
    Rng rng(derive_seed(seed, doc.id));
    return static_cast<std::size_t>(rng.below(doc.sentences.size()));
}

std::string_view to_string(Ranker ranker) noexcept {
    switch (ranker) {
        case Ranker::SemSimRank: return "semsimrank";
        case Ranker::FirstSentence: return "first_sentence";
        case Ranker::RandomSentence: return "random_sentence";
    }
    return "?";
}

std::optional<Ranker> parse_ranker(std::string_view s) noexcept {
    if (s == "semsimrank") return Ranker::SemSimRank;
    if (s == "first_sentence") return Ranker::FirstSentence;
    if (s == "random_sentence") return Ranker::RandomSentence;
    return std::nullopt;
}

std::vector<std::size_t> prominent_sentences(Ranker ranker, const Document& doc, SimilarityMethod method,
                                             const SimilarityContext& context, const RankConfig& config) {
    switch (ranker) {
        case Ranker::SemSimRank:
            return select_top_n(rank_sentences(doc, method, context, config).order, config.top_n);
        case Ranker::FirstSentence:
            return {first_sentence_baseline(doc)};
        case Ranker::RandomSentence:
            return {random_sentence_baseline(doc, config.random_seed)};
    }
    return {};
}

}  // namespace prominence
