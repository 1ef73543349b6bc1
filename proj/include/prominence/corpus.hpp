#pragma once

#include "prominence/coresc_scheme.hpp"
#include "prominence/textproc.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace prominence {

enum class DocumentKind : std::uint8_t { News, Paper, CaseStudy };
enum class LinkMethod : std::uint8_t { Doi, Hyperlink, Inferred };

std::string_view to_string(DocumentKind kind) noexcept;
std::string_view to_string(LinkMethod method) noexcept;
std::optional<DocumentKind> parse_document_kind(std::string_view s) noexcept;
std::optional<LinkMethod> parse_link_method(std::string_view s) noexcept;

struct Document {
    std::string id;
    DocumentKind kind = DocumentKind::News;
    std::string title;
    std::optional<std::string> doi;
    std::optional<std::string> outlet_or_venue;
    // Case studies declare the unit of assessment their score comes from.
    std::optional<std::string> institution;
    std::optional<std::string> uoa;
    std::string raw_text;
    std::vector<Sentence> sentences;
    std::optional<std::vector<CoreSCCategory>> coresc_labels;
};

struct LinkRecord {
    std::string source_id;
    std::string target_id;
    LinkMethod method = LinkMethod::Doi;

    bool operator==(const LinkRecord&) const = default;
};

/// Published star profile for one (institution, UoA). Key 0 is unclassified.
struct UoAResult {
    std::string institution;
    std::string uoa;
    std::map<int, std::int64_t> counts;
    std::optional<double> fte;
};

struct TextConfig {
    SegmenterConfig segmenter = SegmenterConfig::defaults();
    TokenFilterConfig tokens = TokenFilterConfig::defaults();
};

/// Validated, immutable set of documents, links and UoA results.
class Corpus {
public:
    Corpus() = default;

    /// Checks every invariant; throws ValidationError naming the offender.
    Corpus(std::vector<Document> documents, std::vector<LinkRecord> links,
           std::vector<UoAResult> uoa_results);

    const std::vector<Document>& documents() const noexcept { return documents_; }
    const std::vector<LinkRecord>& links() const noexcept { return links_; }
    const std::vector<UoAResult>& uoa_results() const noexcept { return uoa_results_; }

    const Document* find(std::string_view id) const;
    const Document& at(std::string_view id) const;
    const UoAResult* find_uoa(std::string_view institution, std::string_view uoa) const;
    bool has_link(std::string_view source_id, std::string_view target_id) const;

    /// Copy with CoreSC labels attached to `doc_id`.
    Corpus with_labels(std::string_view doc_id, std::vector<CoreSCCategory> labels) const;

    /// Copy with extra links appended (validated like the originals).
    Corpus with_links(const std::vector<LinkRecord>& extra) const;

private:
    std::vector<Document> documents_;
    std::vector<LinkRecord> links_;
    std::vector<UoAResult> uoa_results_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

/// Reads a JSONL corpus. Documents without a `sentences` array are segmented
/// from raw_text; every sentence is tokenized with `text`.
Corpus load_corpus(const std::filesystem::path& path, const TextConfig& text = {});
Corpus parse_corpus(std::istream& in, const TextConfig& text = {});

/// Canonical JSONL: documents, then links, then UoA results, keys sorted.
void save_corpus(const Corpus& corpus, std::ostream& out);

/// Canonical JSONL line for one link record.
std::string link_to_jsonl(const LinkRecord& link);

double mean_uoa_score(const UoAResult& result);

enum class CollectionLabel : std::uint8_t { FLinked, DUnlinked };

std::string_view to_string(CollectionLabel label) noexcept;

struct DocumentPair {
    std::string news_id;
    std::string paper_id;

    auto operator<=>(const DocumentPair&) const = default;
};

struct Collection {
    CollectionLabel label = CollectionLabel::DUnlinked;
    std::vector<DocumentPair> pairs;
};

struct CollectionPartition {
    Collection linked{CollectionLabel::FLinked, {}};
    Collection unlinked{CollectionLabel::DUnlinked, {}};
};

/// Splits distinct news->paper pairs by whether any case study links to the
/// news article or to the paper. Pairs come out sorted by (news, paper).
CollectionPartition partition_collections(const Corpus& corpus);

}  // namespace prominence
