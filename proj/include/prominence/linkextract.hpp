#pragma once

#include "prominence/corpus.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace prominence {

struct CharSpan {
    std::size_t begin = 0;
    std::size_t end = 0;

    bool operator==(const CharSpan&) const = default;
};

struct DoiCandidate {
    std::string raw;         // matched text, trailing punctuation removed
    std::string normalized;  // lowercase, no resolver prefix
    CharSpan char_span;      // byte offsets of `raw` in the source text
};

/// True for lowercase "10.<digits>(.<digits>)*/<non-empty suffix>" with no
/// whitespace and no trailing sentence punctuation.
bool is_normalized_doi(std::string_view doi) noexcept;

/// Lowercases, strips "doi:" / resolver URL prefixes and trailing
/// punctuation. Returns nullopt if the result is not a DOI.
std::optional<std::string> normalize_doi(std::string_view text);

/// Free-text scan for DOIs with a registrant code of at least four digits.
/// Matches are non-overlapping, maximal, and ordered by position.
std::vector<DoiCandidate> extract_dois(std::string_view text);

/// DOI from publisher metadata (citation_doi, then dc.identifier, then
/// prism.doi), else from the first doi.org anchor, else from a raw scan.
std::optional<std::string> extract_doi_from_html(std::string_view html);

/// News->paper links implied by DOIs quoted in news text. Links already in
/// the corpus are not repeated. Output follows news document order, then the
/// order in which DOIs first appear in the text.
std::vector<LinkRecord> link_documents(const Corpus& corpus);

}  // namespace prominence
