#pragma once

#include "prominence/corpus.hpp"
#include "prominence/similarity.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace prominence {

/// Dense S x S sentence-similarity matrix, row-major.
class SimilarityMatrix {
public:
    SimilarityMatrix() = default;
    explicit SimilarityMatrix(std::size_t size) : size_(size), weights_(size * size, 0.0) {}
    SimilarityMatrix(std::size_t size, std::vector<double> row_major, bool normalized = false);

    std::size_t size() const noexcept { return size_; }
    bool normalized() const noexcept { return normalized_; }

    double operator()(std::size_t i, std::size_t j) const { return weights_[i * size_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return weights_[i * size_ + j]; }

    std::span<const double> row(std::size_t i) const { return {weights_.data() + i * size_, size_}; }
    const std::vector<double>& data() const noexcept { return weights_; }

    void mark_normalized() noexcept { normalized_ = true; }

private:
    std::size_t size_ = 0;
    std::vector<double> weights_;
    bool normalized_ = false;
};

struct RankConfig {
    double damping = 0.85;
    std::size_t max_iterations = 100;
    double convergence_threshold = 1e-6;
    std::size_t top_n = 1;
    std::uint64_t random_seed = 0;

    /// Throws ValidationError for out-of-range fields.
    void validate() const;
};

struct RankVector {
    std::vector<double> scores;
    std::size_t iterations_used = 0;
    bool converged = false;
};

struct RankedSentence {
    std::size_t index = 0;
    double score = 0.0;

    bool operator==(const RankedSentence&) const = default;
};

struct Ranking {
    std::vector<RankedSentence> order;  // score descending, ties by index
    RankVector rank;
};

/// E[i][j] = theta(s_i, s_j) for i != j, zero diagonal. Each unordered pair
/// is computed once.
SimilarityMatrix build_graph(const Document& doc, SimilarityMethod method, const SimilarityContext& context);

/// Row-stochastic copy of `matrix`. A row with zero sum becomes uniform over
/// the other S-1 sentences; a 1x1 matrix stays [[0]].
SimilarityMatrix row_normalize(const SimilarityMatrix& matrix);

/// Damped power iteration on a row-normalized matrix:
///   P_i <- (1-d)/S + d * sum_j E[j][i] * P_j
/// starting from uniform, until sum_i |dP_i| < threshold or max_iterations.
RankVector pagerank(const SimilarityMatrix& normalized, const RankConfig& config);

/// Scores sorted descending; equal scores keep ascending sentence order.
std::vector<RankedSentence> order_by_score(const std::vector<double>& scores);

Ranking rank_sentences(const Document& doc, SimilarityMethod method, const SimilarityContext& context,
                       const RankConfig& config);

std::vector<std::size_t> select_top_n(const std::vector<RankedSentence>& ranking, std::size_t n);

std::size_t first_sentence_baseline(const Document& doc);

/// Uniform over [0, S), fixed for a given (seed, document id).
std::size_t random_sentence_baseline(const Document& doc, std::uint64_t seed);

enum class Ranker : std::uint8_t { SemSimRank, FirstSentence, RandomSentence };

std::string_view to_string(Ranker ranker) noexcept;
std::optional<Ranker> parse_ranker(std::string_view s) noexcept;

/// Prominent news sentence indices for `ranker`. The baselines always pick a
/// single sentence; SemSimRank returns the top `config.top_n`.
std::vector<std::size_t> prominent_sentences(Ranker ranker, const Document& doc, SimilarityMethod method,
                                             const SimilarityContext& context, const RankConfig& config);

}  // namespace prominence
