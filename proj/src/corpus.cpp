#include "prominence/corpus.hpp"

#include "prominence/error.hpp"
#include "prominence/linkextract.hpp"

#include "json.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>

namespace prominence {

using nlohmann::json;

std::string_view to_string(DocumentKind kind) noexcept {
    switch (kind) {
        case DocumentKind::News: return "news";
        case DocumentKind::Paper: return "paper";
        case DocumentKind::CaseStudy: return "case_study";
    }
    return "?";
}

std::string_view to_string(LinkMethod method) noexcept {
    switch (method) {
        case LinkMethod::Doi: return "doi";
        case LinkMethod::Hyperlink: return "hyperlink";
        case LinkMethod::Inferred: return "inferred";
    }
    return "?";
}

std::string_view to_string(CollectionLabel label) noexcept {
    return label == CollectionLabel::FLinked ? "F_linked" : "D_unlinked";
}

std::optional<DocumentKind> parse_document_kind(std::string_view s) noexcept {
    if (s == "news") return DocumentKind::News;
    if (s == "paper") return DocumentKind::Paper;
    if (s == "case_study") return DocumentKind::CaseStudy;
    return std::nullopt;
}

std::optional<LinkMethod> parse_link_method(std::string_view s) noexcept {
    if (s == "doi") return LinkMethod::Doi;
    if (s == "hyperlink") return LinkMethod::Hyperlink;
    if (s == "inferred") return LinkMethod::Inferred;
    return std::nullopt;
}

namespace {

void validate_document(const Document& doc) {
    if (doc.id.empty()) throw ValidationError("document with empty id");
    if (doc.doi && !is_normalized_doi(*doc.doi)) {
        throw ValidationError("document " + doc.id + ": malformed DOI '" + *doc.doi + "'");
    }
    for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
        if (doc.sentences[i].index != i) {
            throw ValidationError("document " + doc.id + ": sentence indices must be 0.." +
                                  std::to_string(doc.sentences.size() - 1) + " in order");
        }
        if (doc.sentences[i].text.empty()) {
            throw ValidationError("document " + doc.id + ": empty sentence " + std::to_string(i));
        }
    }
    if (doc.coresc_labels) {
        if (doc.kind != DocumentKind::Paper) {
            throw ValidationError("document " + doc.id + ": CoreSC labels are only valid on papers");
        }
        if (doc.coresc_labels->size() != doc.sentences.size()) {
            throw ValidationError("document " + doc.id + ": " + std::to_string(doc.coresc_labels->size()) +
                                  " CoreSC labels for " + std::to_string(doc.sentences.size()) +
                                  " sentences");
        }
    }
}

bool allowed_link(DocumentKind source, DocumentKind target) noexcept {
    if (source == DocumentKind::News) return target == DocumentKind::Paper;
    if (source == DocumentKind::CaseStudy) {
        return target == DocumentKind::News || target == DocumentKind::Paper;
    }
    return false;
}

}  // namespace

Corpus::Corpus(std::vector<Document> documents, std::vector<LinkRecord> links,
               std::vector<UoAResult> uoa_results)
    : documents_(std::move(documents)), links_(std::move(links)), uoa_results_(std::move(uoa_results)) {
    by_id_.reserve(documents_.size());
    for (std::size_t i = 0; i < documents_.size(); ++i) {
        validate_document(documents_[i]);
        if (!by_id_.emplace(documents_[i].id, i).second) {
            throw ValidationError("duplicate document id " + documents_[i].id);
        }
    }

    std::set<std::pair<std::string_view, std::string_view>> seen;
    for (const auto& link : links_) {
        const Document* source = find(link.source_id);
        const Document* target = find(link.target_id);
        if (!source) throw ValidationError("dangling link: unknown source id " + link.source_id);
        if (!target) throw ValidationError("dangling link: unknown target id " + link.target_id);
        if (!allowed_link(source->kind, target->kind)) {
            throw ValidationError("link " + link.source_id + " -> " + link.target_id + ": " +
                                  std::string(to_string(source->kind)) + " -> " +
                                  std::string(to_string(target->kind)) + " links are not allowed");
        }
        if (!seen.emplace(link.source_id, link.target_id).second) {
            throw ValidationError("duplicate link " + link.source_id + " -> " + link.target_id);
        }
    }

    std::set<std::pair<std::string_view, std::string_view>> uoas;
    for (const auto& r : uoa_results_) {
        for (const auto& [star, count] : r.counts) {
            if (star < 0 || star > 4) {
                throw ValidationError("UoA " + r.institution + "/" + r.uoa + ": star level " +
                                      std::to_string(star) + " outside 0..4");
            }
            if (count < 0) {
                throw ValidationError("UoA " + r.institution + "/" + r.uoa + ": negative count");
            }
        }
        if (r.fte && !(*r.fte >= 0.0)) {
            throw ValidationError("UoA " + r.institution + "/" + r.uoa + ": fte must be non-negative");
        }
        if (!uoas.emplace(r.institution, r.uoa).second) {
            throw ValidationError("duplicate UoA result " + r.institution + "/" + r.uoa);
        }
    }
}

const Document* Corpus::find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    return it == by_id_.end() ? nullptr : &documents_[it->second];
}

const Document& Corpus::at(std::string_view id) const {
    if (const Document* d = find(id)) return *d;
    throw ValidationError("unknown document id " + std::string(id));
}

const UoAResult* Corpus::find_uoa(std::string_view institution, std::string_view uoa) const {
    for (const auto& r : uoa_results_) {
        if (r.institution == institution && r.uoa == uoa) return &r;
    }
    return nullptr;
}

bool Corpus::has_link(std::string_view source_id, std::string_view target_id) const {
    for (const auto& l : links_) {
        if (l.source_id == source_id && l.target_id == target_id) return true;
    }
    return false;
}

Corpus Corpus::with_labels(std::string_view doc_id, std::vector<CoreSCCategory> labels) const {
    auto docs = documents_;
    auto it = by_id_.find(std::string(doc_id));
    if (it == by_id_.end()) throw ValidationError("unknown doc_id " + std::string(doc_id));
    docs[it->second].coresc_labels = std::move(labels);
    return Corpus(std::move(docs), links_, uoa_results_);
}

Corpus Corpus::with_links(const std::vector<LinkRecord>& extra) const {
    auto links = links_;
    links.insert(links.end(), extra.begin(), extra.end());
    return Corpus(documents_, std::move(links), uoa_results_);
}

namespace {

template <typename T>
T required(const json& j, const char* key) {
    if (!j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
    return j.at(key).get<T>();
}

template <typename T>
std::optional<T> optional_field(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

Document parse_document(const json& j, const TextConfig& text) {
    Document doc;
    doc.id = required<std::string>(j, "id");
    const auto kind = required<std::string>(j, "kind");
    auto parsed_kind = parse_document_kind(kind);
    if (!parsed_kind) throw ValidationError("unknown document kind '" + kind + "'");
    doc.kind = *parsed_kind;
    doc.title = optional_field<std::string>(j, "title").value_or("");
    doc.doi = optional_field<std::string>(j, "doi");
    doc.outlet_or_venue = optional_field<std::string>(j, "outlet_or_venue");
    doc.institution = optional_field<std::string>(j, "institution");
    doc.uoa = optional_field<std::string>(j, "uoa");
    doc.raw_text = required<std::string>(j, "raw_text");

    if (j.contains("sentences") && !j.at("sentences").is_null()) {
        for (const auto& s : j.at("sentences")) {
            doc.sentences.push_back(
                Sentence{required<std::size_t>(s, "index"), required<std::string>(s, "text"), {}});
        }
    } else {
        doc.sentences = segment_sentences(doc.raw_text, text.segmenter);
    }
    tokenize_sentences(doc.sentences, text.tokens);

    if (j.contains("coresc_labels") && !j.at("coresc_labels").is_null()) {
        std::vector<CoreSCCategory> labels;
        for (const auto& l : j.at("coresc_labels")) {
            const auto label = l.get<std::string>();
            auto category = parse_coresc_category(label);
            if (!category) throw ValidationError("unknown CoreSC category '" + label + "'");
            labels.push_back(*category);
        }
        doc.coresc_labels = std::move(labels);
    }
    return doc;
}

LinkRecord parse_link(const json& j) {
    LinkRecord link;
    link.source_id = required<std::string>(j, "source_id");
    link.target_id = required<std::string>(j, "target_id");
    const auto method = required<std::string>(j, "method");
    auto parsed = parse_link_method(method);
    if (!parsed) throw ValidationError("unknown link method '" + method + "'");
    link.method = *parsed;
    return link;
}

UoAResult parse_uoa(const json& j) {
    UoAResult r;
    r.institution = required<std::string>(j, "institution");
    r.uoa = required<std::string>(j, "uoa");
    const auto& counts = j.at("counts");
    if (!counts.is_object()) throw ValidationError("counts must be an object");
    for (const auto& [key, value] : counts.items()) {
        if (key.size() != 1 || key[0] < '0' || key[0] > '4') {
            throw ValidationError("counts key '" + key + "' is not a star level 0..4");
        }
        if (!value.is_number_integer()) throw ValidationError("counts must be integers");
        r.counts[key[0] - '0'] = value.get<std::int64_t>();
    }
    r.fte = optional_field<double>(j, "fte");
    return r;
}

}  // namespace

Corpus parse_corpus(std::istream& in, const TextConfig& text) {
    text.tokens.validate();
    std::vector<Document> documents;
    std::vector<LinkRecord> links;
    std::vector<UoAResult> uoas;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            const json j = json::parse(line);
            if (!j.is_object()) throw ValidationError("record is not a JSON object");
            const auto record = required<std::string>(j, "record");
            if (record == "document") {
                documents.push_back(parse_document(j, text));
            } else if (record == "link") {
                links.push_back(parse_link(j));
            } else if (record == "uoa_result") {
                uoas.push_back(parse_uoa(j));
            } else {
                throw ValidationError("unknown record type '" + record + "'");
            }
        } catch (const json::exception& e) {
            throw ValidationError("line " + std::to_string(line_no) + ": malformed JSON: " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return Corpus(std::move(documents), std::move(links), std::move(uoas));
}

Corpus load_corpus(const std::filesystem::path& path, const TextConfig& text) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ResourceError("cannot read corpus " + path.string());
    return parse_corpus(in, text);
}

namespace {

json document_json(const Document& d) {
    json j;
    j["record"] = "document";
    j["id"] = d.id;
    j["kind"] = std::string(to_string(d.kind));
    j["title"] = d.title;
    if (d.doi) j["doi"] = *d.doi;
    if (d.outlet_or_venue) j["outlet_or_venue"] = *d.outlet_or_venue;
    if (d.institution) j["institution"] = *d.institution;
    if (d.uoa) j["uoa"] = *d.uoa;
    j["raw_text"] = d.raw_text;
    json sentences = json::array();
    for (const auto& s : d.sentences) sentences.push_back({{"index", s.index}, {"text", s.text}});
    j["sentences"] = std::move(sentences);
    if (d.coresc_labels) {
        json labels = json::array();
        for (auto c : *d.coresc_labels) labels.push_back(std::string(to_string(c)));
        j["coresc_labels"] = std::move(labels);
    }
    return j;
}

json link_json(const LinkRecord& l) {
    return {{"record", "link"},
            {"source_id", l.source_id},
            {"target_id", l.target_id},
            {"method", std::string(to_string(l.method))}};
}

}  // namespace

std::string link_to_jsonl(const LinkRecord& link) { return link_json(link).dump(); }

void save_corpus(const Corpus& corpus, std::ostream& out) {
    for (const auto& d : corpus.documents()) out << document_json(d).dump() << '\n';
    for (const auto& l : corpus.links()) out << link_json(l).dump() << '\n';
    for (const auto& r : corpus.uoa_results()) {
        json j;
        j["record"] = "uoa_result";
        j["institution"] = r.institution;
        j["uoa"] = r.uoa;
        json counts = json::object();
        for (const auto& [star, count] : r.counts) counts[std::to_string(star)] = count;
        j["counts"] = std::move(counts);
        if (r.fte) j["fte"] = *r.fte;
        out << j.dump() << '\n';
    }
}

double mean_uoa_score(const UoAResult& result) {
    std::int64_t total = 0;
    std::int64_t weighted = 0;
    for (const auto& [star, count] : result.counts) {
        total += count;
        weighted += static_cast<std::int64_t>(star) * count;
    }
    if (total <= 0) {
        throw ValidationError("UoA " + result.institution + "/" + result.uoa +
                              " has no scored case studies; mean score undefined");
    }
    return static_cast<double>(weighted) / static_cast<double>(total);
}

CollectionPartition partition_collections(const Corpus& corpus) {
    std::set<std::string_view> case_study_targets;
    std::set<DocumentPair> pairs;
    for (const auto& link : corpus.links()) {
        const auto& source = corpus.at(link.source_id);
        if (source.kind == DocumentKind::CaseStudy) {
            case_study_targets.insert(link.target_id);
        } else if (source.kind == DocumentKind::News) {
            pairs.insert(DocumentPair{link.source_id, link.target_id});
        }
    }
    CollectionPartition out;
    for (const auto& p : pairs) {
        const bool linked = case_study_targets.contains(p.news_id) || case_study_targets.contains(p.paper_id);
        (linked ? out.linked : out.unlinked).pairs.push_back(p);
    }
    return out;
}

}  // namespace prominence
