#pragma once

#include "prominence/corpus.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace prominence {

enum class SimilarityMethod : std::uint8_t { BowJsd, WordvecCos, SentvecCos };

std::string_view to_string(SimilarityMethod method) noexcept;
std::optional<SimilarityMethod> parse_similarity_method(std::string_view s) noexcept;

/// Pretrained word vectors keyed by lowercase token.
class WordVectorTable {
public:
    WordVectorTable() = default;

    /// Throws ValidationError on ragged rows, duplicates or non-finite values.
    void add(std::string token, std::vector<double> vector);

    /// nullopt until the first entry is added.
    std::optional<std::size_t> dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return entries_.size(); }
    const std::vector<double>* find(std::string_view token) const;

private:
    std::optional<std::size_t> dimension_;
    std::unordered_map<std::string, std::vector<double>> entries_;
};

/// Externally computed per-sentence embeddings keyed by (doc id, sentence index).
class SentenceEmbeddingStore {
public:
    SentenceEmbeddingStore() = default;

    void add(std::string doc_id, std::size_t sentence_index, std::vector<double> vector);

    std::optional<std::size_t> dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return entries_.size(); }
    const std::vector<double>* find(std::string_view doc_id, std::size_t sentence_index) const;

    /// Every key must name an existing sentence of `corpus`.
    void check_against(const Corpus& corpus) const;

private:
    std::optional<std::size_t> dimension_;
    std::map<std::pair<std::string, std::size_t>, std::vector<double>, std::less<>> entries_;
};

/// Whitespace-separated "token v1 ... vd" lines.
WordVectorTable load_word_vectors(const std::filesystem::path& path);

/// JSONL lines {"doc_id", "sentence_index", "vector": [...]}.
SentenceEmbeddingStore load_sentence_embeddings(const std::filesystem::path& path);

/// Resources a similarity method may need. Non-owning.
struct SimilarityContext {
    const WordVectorTable* word_vectors = nullptr;
    const SentenceEmbeddingStore* sentence_embeddings = nullptr;

    /// Throws ResourceError if `method` lacks its table or store.
    void require(SimilarityMethod method) const;
};

struct SentenceRef {
    const Document* doc = nullptr;
    std::size_t index = 0;

    const Sentence& sentence() const { return doc->sentences.at(index); }
};

/// Jensen-Shannon distance with base-2 logarithms: sqrt(JSD), in [0, 1].
/// Inputs must be equal-length probability vectors (sums within 1e-9).
double js_distance(std::span<const double> p, std::span<const double> q);

/// 1 - js_distance over count vectors built on the union vocabulary of the
/// two token lists. Returns 0 when either list is empty.
double bow_similarity(const std::vector<std::string>& a, const std::vector<std::string>& b);
double bow_similarity(const Sentence& a, const Sentence& b);

/// Cosine similarity; 0 if either vector has zero norm.
double cosine(std::span<const double> u, std::span<const double> v);

/// Mean of the vectors of in-table tokens; zero vector when none are found.
std::vector<double> mean_word_vector(const std::vector<std::string>& tokens, const WordVectorTable& table);

/// Non-negative edge weight for cosine-based methods.
inline double clamp_similarity(double raw_cosine) noexcept { return raw_cosine > 0.0 ? raw_cosine : 0.0; }

/// theta(a, b) for the chosen method, in [0, 1] and exactly symmetric.
double pair_similarity(SimilarityMethod method, const SimilarityContext& context, SentenceRef a, SentenceRef b);

/// Precomputed per-sentence representations so repeated comparisons against
/// the same sentences do not redo pooling or lookups. Gives the same values
/// as pair_similarity.
class SentenceEncoder {
public:
    SentenceEncoder(SimilarityMethod method, const SimilarityContext& context);

    SimilarityMethod method() const noexcept { return method_; }

    struct Encoded {
        const std::vector<std::string>* tokens = nullptr;
        std::vector<double> owned;
        const std::vector<double>* borrowed = nullptr;

        const std::vector<double>& vector() const { return borrowed ? *borrowed : owned; }
    };

    Encoded encode(SentenceRef ref) const;
    double similarity(const Encoded& a, const Encoded& b) const;

private:
    SimilarityMethod method_;
    SimilarityContext context_;
};

}  // namespace prominence
