#include "prominence/textproc.hpp"

#include "prominence/error.hpp"

#include <fstream>
#include <unordered_map>

namespace prominence {

namespace {

#include "default_lists.inc"

bool is_space(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_ascii_upper(char c) noexcept { return c >= 'A' && c <= 'Z'; }
bool is_ascii_digit(char c) noexcept { return c >= '0' && c <= '9'; }

bool starts_with_at(std::string_view s, std::size_t pos, std::string_view prefix) noexcept {
    return s.size() >= pos + prefix.size() && s.compare(pos, prefix.size(), prefix) == 0;
}

// UTF-8 right single/double quotes.
constexpr std::string_view kRightSingle = "\xE2\x80\x99";
constexpr std::string_view kRightDouble = "\xE2\x80\x9D";
constexpr std::string_view kLeftSingle = "\xE2\x80\x98";
constexpr std::string_view kLeftDouble = "\xE2\x80\x9C";

// Length of a closing quote/bracket at `pos`, 0 if none.
std::size_t closer_len(std::string_view s, std::size_t pos) noexcept {
    const char c = s[pos];
    if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
    if (starts_with_at(s, pos, kRightSingle) || starts_with_at(s, pos, kRightDouble)) return 3;
    return 0;
}

bool opens_sentence(std::string_view s, std::size_t pos) noexcept {
    const char c = s[pos];
    if (is_ascii_upper(c) || is_ascii_digit(c) || c == '"' || c == '\'') return true;
    return starts_with_at(s, pos, kLeftSingle) || starts_with_at(s, pos, kLeftDouble);
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c : s) {
        if (is_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

// The whitespace-delimited word that ends at `end` (exclusive), with leading
// opening punctuation removed.
std::string_view word_ending_at(std::string_view s, std::size_t end) noexcept {
    std::size_t begin = end;
    while (begin > 0 && !is_space(s[begin - 1])) --begin;
    while (begin < end && (s[begin] == '(' || s[begin] == '[' || s[begin] == '"' || s[begin] == '\'')) ++begin;
    return s.substr(begin, end - begin);
}

struct CodePoint {
    char32_t value;
    std::size_t length;
};

CodePoint decode_utf8(std::string_view s, std::size_t pos) noexcept {
    const auto b0 = static_cast<unsigned char>(s[pos]);
    if (b0 < 0x80) return {b0, 1};
    std::size_t len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        return {0xFFFD, 1};
    }
    if (pos + len > s.size()) return {0xFFFD, 1};
    for (std::size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[pos + k]);
        if ((b & 0xC0) != 0x80) return {0xFFFD, 1};
        cp = (cp << 6) | (b & 0x3F);
    }
    return {cp, len};
}

bool is_word_code_point(char32_t cp) noexcept {
    if (cp < 0x80) {
        return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
    }
    if (cp <= 0xBF || cp == 0xD7 || cp == 0xF7) return false;      // Latin-1 punctuation, nbsp
    if (cp >= 0x2000 && cp <= 0x206F) return false;                  // general punctuation
    if (cp >= 0x2190 && cp <= 0x2BFF) return false;                  // arrows, math, symbols
    if (cp >= 0x3000 && cp <= 0x303F) return false;                  // CJK punctuation
    if (cp == 0xFEFF || cp == 0xFFFD) return false;
    return true;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

char32_t to_lower(char32_t cp) noexcept {
    if (cp >= 'A' && cp <= 'Z') return cp + 32;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;  // Latin-1 capitals
    return cp;
}

}  // namespace

std::unordered_set<std::string> read_word_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("cannot read word list " + path.string());
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && is_space(line.back())) line.pop_back();
        std::size_t start = 0;
        while (start < line.size() && is_space(line[start])) ++start;
        if (start < line.size()) words.insert(line.substr(start));
    }
    return words;
}

const TokenFilterConfig& TokenFilterConfig::defaults() {
    static const TokenFilterConfig config = [] {
        TokenFilterConfig c;
        for (const char* w : kDefaultStopwords) c.stopwords.insert(w);
        return c;
    }();
    return config;
}

TokenFilterConfig TokenFilterConfig::with_stopwords_file(const std::filesystem::path& path) {
    TokenFilterConfig c = defaults();
    c.stopwords = read_word_list(path);
    return c;
}

void TokenFilterConfig::validate() const {
    if (min_token_len < 1) throw ValidationError("min_token_len must be at least 1");
}

const SegmenterConfig& SegmenterConfig::defaults() {
    static const SegmenterConfig config = [] {
        SegmenterConfig c;
        for (const char* w : kDefaultAbbreviations) c.abbreviations.insert(w);
        return c;
    }();
    return config;
}

SegmenterConfig SegmenterConfig::with_abbreviations_file(const std::filesystem::path& path) {
    SegmenterConfig c;
    c.abbreviations = read_word_list(path);
    return c;
}

std::vector<Sentence> segment_sentences(std::string_view raw, const SegmenterConfig& config) {
    std::vector<Sentence> out;
    auto emit = [&](std::size_t begin, std::size_t end) {
        std::string text = collapse_whitespace(raw.substr(begin, end - begin));
        if (!text.empty()) out.push_back(Sentence{out.size(), std::move(text), {}});
    };

    std::size_t start = 0;
    std::size_t i = 0;
    while (i < raw.size()) {
        const char c = raw[i];
        if (c != '.' && c != '!' && c != '?') {
            ++i;
            continue;
        }
        // Swallow runs such as "?!", "..." and trailing closers like ." or .)
        std::size_t end = i + 1;
        while (end < raw.size()) {
            if (raw[end] == '.' || raw[end] == '!' || raw[end] == '?') {
                ++end;
            } else if (std::size_t n = closer_len(raw, end)) {
                end += n;
            } else {
                break;
            }
        }
        if (end >= raw.size() || !is_space(raw[end])) {
            i = end;
            continue;
        }
        std::size_t next = end;
        while (next < raw.size() && is_space(raw[next])) ++next;
        if (next >= raw.size() || !opens_sentence(raw, next)) {
            i = end;
            continue;
        }
        if (c == '.' && config.abbreviations.contains(std::string(word_ending_at(raw, i + 1)))) {
            i = end;
            continue;
        }
        emit(start, end);
        start = next;
        i = next;
    }
    if (start < raw.size()) emit(start, raw.size());
    return out;
}

std::vector<std::string> tokenize(std::string_view text, const TokenFilterConfig& config) {
    std::vector<std::string> tokens;
    std::string current;
    std::string lowered;
    std::size_t current_len = 0;

    auto flush = [&] {
        if (current.empty()) return;
        if (current_len >= config.min_token_len && !config.stopwords.contains(lowered)) {
            tokens.push_back(config.lowercase ? lowered : current);
        }
        current.clear();
        lowered.clear();
        current_len = 0;
    };

    std::size_t pos = 0;
    while (pos < text.size()) {
        const CodePoint cp = decode_utf8(text, pos);
        if (is_word_code_point(cp.value)) {
            current.append(text.substr(pos, cp.length));
            append_utf8(lowered, to_lower(cp.value));
            ++current_len;
        } else {
            flush();
        }
        pos += cp.length;
    }
    flush();
    return tokens;
}

std::vector<std::size_t> count_vector(const std::vector<std::string>& tokens,
                                      const std::vector<std::string>& vocabulary) {
    std::unordered_map<std::string_view, std::size_t> slot;
    slot.reserve(vocabulary.size());
    for (std::size_t v = 0; v < vocabulary.size(); ++v) slot.emplace(vocabulary[v], v);
    std::vector<std::size_t> counts(vocabulary.size(), 0);
    for (const auto& t : tokens) {
        if (auto it = slot.find(t); it != slot.end()) ++counts[it->second];
    }
    return counts;
}

void tokenize_sentences(std::vector<Sentence>& sentences, const TokenFilterConfig& config) {
    for (auto& s : sentences) s.tokens = tokenize(s.text, config);
}

}  // namespace prominence
