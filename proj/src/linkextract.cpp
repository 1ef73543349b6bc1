#include "prominence/linkextract.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <unordered_map>

namespace prominence {

namespace {

constexpr std::string_view kTrailingPunctuation = ".,;:)]}\"'";

bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }
bool is_alnum(char c) noexcept {
    return is_digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
bool is_space(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
bool is_suffix_char(char c) noexcept { return !is_space(c) && c != '<' && c != '>'; }

char lower(char c) noexcept { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; }

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), lower);
    return out;
}

bool iequals(std::string_view a, std::string_view b) noexcept {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(),
                                              [](char x, char y) { return lower(x) == lower(y); });
}

std::string_view strip_trailing(std::string_view s) noexcept {
    while (!s.empty() && kTrailingPunctuation.find(s.back()) != std::string_view::npos) s.remove_suffix(1);
    return s;
}

// Length of a DOI starting at `pos` ("10." already checked), or 0. Requires
// at least `min_registrant_digits` digits in the first registrant segment.
std::size_t match_doi(std::string_view s, std::size_t pos, std::size_t min_registrant_digits) noexcept {
    std::size_t i = pos + 3;
    std::size_t digits = 0;
    while (i < s.size() && is_digit(s[i])) ++i, ++digits;
    if (digits < min_registrant_digits) return 0;
    while (i + 1 < s.size() && s[i] == '.' && is_digit(s[i + 1])) {
        ++i;
        while (i < s.size() && is_digit(s[i])) ++i;
    }
    if (i >= s.size() || s[i] != '/') return 0;
    ++i;
    const std::size_t suffix_begin = i;
    while (i < s.size() && is_suffix_char(s[i])) ++i;
    const auto full = s.substr(pos, i - pos);
    const auto trimmed = strip_trailing(full);
    if (pos + trimmed.size() <= suffix_begin) return 0;
    return trimmed.size();
}

bool doi_start_boundary(std::string_view s, std::size_t pos) noexcept {
    return pos == 0 || (!is_alnum(s[pos - 1]) && s[pos - 1] != '.');
}

// Minimal tag scanner: yields attribute maps for every <tag ...> with the given name.
using Attributes = std::vector<std::pair<std::string, std::string>>;

std::vector<Attributes> scan_tags(std::string_view html, std::string_view tag) {
    std::vector<Attributes> tags;
    std::size_t pos = 0;
    while ((pos = html.find('<', pos)) != std::string_view::npos) {
        ++pos;
        if (pos + tag.size() > html.size() || !iequals(html.substr(pos, tag.size()), tag)) continue;
        std::size_t i = pos + tag.size();
        if (i < html.size() && !is_space(html[i]) && html[i] != '>' && html[i] != '/') continue;
        Attributes attrs;
        while (i < html.size() && html[i] != '>') {
            while (i < html.size() && (is_space(html[i]) || html[i] == '/')) ++i;
            if (i >= html.size() || html[i] == '>') break;
            std::size_t name_begin = i;
            while (i < html.size() && !is_space(html[i]) && html[i] != '=' && html[i] != '>') ++i;
            std::string name = to_lower(html.substr(name_begin, i - name_begin));
            while (i < html.size() && is_space(html[i])) ++i;
            std::string value;
            if (i < html.size() && html[i] == '=') {
                ++i;
                while (i < html.size() && is_space(html[i])) ++i;
                if (i < html.size() && (html[i] == '"' || html[i] == '\'')) {
                    const char quote = html[i++];
                    const std::size_t end = html.find(quote, i);
                    if (end == std::string_view::npos) break;  // truncated
                    value = std::string(html.substr(i, end - i));
                    i = end + 1;
                } else {
                    std::size_t vb = i;
                    while (i < html.size() && !is_space(html[i]) && html[i] != '>') ++i;
                    value = std::string(html.substr(vb, i - vb));
                }
            }
            if (!name.empty()) attrs.emplace_back(std::move(name), std::move(value));
        }
        tags.push_back(std::move(attrs));
        pos = i;
    }
    return tags;
}

const std::string* attribute(const Attributes& attrs, std::string_view name) {
    for (const auto& [k, v] : attrs) {
        if (k == name) return &v;
    }
    return nullptr;
}

std::string decode_basic_entities(std::string_view s) {
    static constexpr std::array<std::pair<std::string_view, char>, 5> kEntities = {{
        {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&#39;", '\''}}};
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        bool replaced = false;
        if (s[i] == '&') {
            for (const auto& [entity, ch] : kEntities) {
                if (s.substr(i, entity.size()) == entity) {
                    out.push_back(ch);
                    i += entity.size();
                    replaced = true;
                    break;
                }
            }
        }
        if (!replaced) out.push_back(s[i++]);
    }
    return out;
}

}  // namespace

bool is_normalized_doi(std::string_view doi) noexcept {
    if (doi.size() < 3 || doi.substr(0, 3) != "10.") return false;
    for (char c : doi) {
        if (c >= 'A' && c <= 'Z') return false;
    }
    return match_doi(doi, 0, 1) == doi.size();
}

std::optional<std::string> normalize_doi(std::string_view text) {
    std::string s = to_lower(text);
    std::string_view view = s;
    while (!view.empty() && is_space(view.front())) view.remove_prefix(1);
    while (!view.empty() && is_space(view.back())) view.remove_suffix(1);
    // Skip any resolver / scheme prefix ("doi:", "https://doi.org/", "info:doi/").
    std::size_t start = std::string_view::npos;
    for (std::size_t p = view.find("10."); p != std::string_view::npos; p = view.find("10.", p + 1)) {
        if (doi_start_boundary(view, p)) {
            start = p;
            break;
        }
    }
    if (start == std::string_view::npos) return std::nullopt;
    view.remove_prefix(start);
    const std::size_t len = match_doi(view, 0, 1);
    if (len == 0) return std::nullopt;
    // Anything after the DOI other than whitespace means this was not a bare DOI.
    for (std::size_t i = len; i < view.size(); ++i) {
        if (!is_space(view[i]) && kTrailingPunctuation.find(view[i]) == std::string_view::npos) {
            return std::nullopt;
        }
    }
    return std::string(view.substr(0, len));
}

std::vector<DoiCandidate> extract_dois(std::string_view text) {
    std::vector<DoiCandidate> out;
    std::size_t pos = 0;
    while ((pos = text.find("10.", pos)) != std::string_view::npos) {
        if (!doi_start_boundary(text, pos)) {
            pos += 3;
            continue;
        }
        const std::size_t len = match_doi(text, pos, 4);
        if (len == 0) {
            pos += 3;
            continue;
        }
        DoiCandidate c;
        c.raw = std::string(text.substr(pos, len));
        c.normalized = to_lower(c.raw);
        c.char_span = {pos, pos + len};
        out.push_back(std::move(c));
        pos += len;
    }
    return out;
}

std::optional<std::string> extract_doi_from_html(std::string_view html) {
    const auto metas = scan_tags(html, "meta");
    for (std::string_view key : {"citation_doi", "dc.identifier", "prism.doi"}) {
        for (const auto& attrs : metas) {
            const std::string* name = attribute(attrs, "name");
            if (!name) name = attribute(attrs, "property");
            const std::string* content = attribute(attrs, "content");
            if (!name || !content || !iequals(*name, key)) continue;
            if (auto doi = normalize_doi(decode_basic_entities(*content))) return doi;
        }
    }
    for (const auto& attrs : scan_tags(html, "a")) {
        const std::string* href = attribute(attrs, "href");
        if (!href || to_lower(*href).find("doi.org") == std::string::npos) continue;
        if (auto doi = normalize_doi(decode_basic_entities(*href))) return doi;
    }
    const auto raw = extract_dois(decode_basic_entities(html));
    if (!raw.empty()) return raw.front().normalized;
    return std::nullopt;
}

std::vector<LinkRecord> link_documents(const Corpus& corpus) {
    std::unordered_map<std::string, std::vector<const Document*>> papers_by_doi;
    for (const auto& d : corpus.documents()) {
        if (d.kind == DocumentKind::Paper && d.doi) papers_by_doi[*d.doi].push_back(&d);
    }
    std::vector<LinkRecord> out;
    std::set<std::pair<std::string, std::string>> emitted;
    for (const auto& news : corpus.documents()) {
        if (news.kind != DocumentKind::News) continue;
        for (const auto& candidate : extract_dois(news.raw_text)) {
            auto it = papers_by_doi.find(candidate.normalized);
            if (it == papers_by_doi.end()) continue;
            for (const Document* paper : it->second) {
                if (corpus.has_link(news.id, paper->id)) continue;
                if (!emitted.emplace(news.id, paper->id).second) continue;
                out.push_back(LinkRecord{news.id, paper->id, LinkMethod::Doi});
            }
        }
    }
    return out;
}

}  // namespace prominence
