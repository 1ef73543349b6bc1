#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace prominence {

struct Sentence {
    std::size_t index = 0;
    std::string text;
    std::vector<std::string> tokens;

    bool operator==(const Sentence&) const = default;
};

struct TokenFilterConfig {
    std::unordered_set<std::string> stopwords;
    std::size_t min_token_len = 3;
    bool lowercase = true;

    /// Shipped stopword list, min length 3, lowercasing on.
    static const TokenFilterConfig& defaults();

    /// Replace the stopword list with one read from `path` (one token per line).
    static TokenFilterConfig with_stopwords_file(const std::filesystem::path& path);

    /// Throws ValidationError if min_token_len is 0.
    void validate() const;
};

struct SegmenterConfig {
    /// Tokens ending in '.' that never end a sentence, e.g. "Dr.", "al.".
    std::unordered_set<std::string> abbreviations;

    static const SegmenterConfig& defaults();
    static SegmenterConfig with_abbreviations_file(const std::filesystem::path& path);
};

/// Rule-based splitter: a sentence ends at '.', '!' or '?' (plus any closing
/// quotes/brackets) followed by whitespace and then an uppercase letter,
/// quote, or digit, unless the word carrying the '.' is a listed abbreviation.
/// Internal whitespace runs collapse to a single space. Sentence tokens are
/// left empty.
std::vector<Sentence> segment_sentences(std::string_view raw_text,
                                        const SegmenterConfig& config = SegmenterConfig::defaults());

/// Maximal alphanumeric runs (non-ASCII letters count as alphanumeric),
/// lowercased, minus stopwords and tokens shorter than min_token_len
/// code points. Order and repetition are preserved.
std::vector<std::string> tokenize(std::string_view sentence_text,
                                  const TokenFilterConfig& config = TokenFilterConfig::defaults());

/// Multiplicity of each vocabulary entry in `tokens`.
std::vector<std::size_t> count_vector(const std::vector<std::string>& tokens,
                                      const std::vector<std::string>& vocabulary);

/// Fill `tokens` for every sentence.
void tokenize_sentences(std::vector<Sentence>& sentences,
                        const TokenFilterConfig& config = TokenFilterConfig::defaults());

std::unordered_set<std::string> read_word_list(const std::filesystem::path& path);

}  // namespace prominence
