#include "prominence/similarity.hpp"

#include "prominence/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace prominence {

std::string_view to_string(SimilarityMethod method) noexcept {
    switch (method) {
        case SimilarityMethod::BowJsd: return "bow_jsd";
        case SimilarityMethod::WordvecCos: return "wordvec_cos";
        case SimilarityMethod::SentvecCos: return "sentvec_cos";
    }
    return "?";
}

std::optional<SimilarityMethod> parse_similarity_method(std::string_view s) noexcept {
    if (s == "bow_jsd") return SimilarityMethod::BowJsd;
    if (s == "wordvec_cos") return SimilarityMethod::WordvecCos;
    if (s == "sentvec_cos") return SimilarityMethod::SentvecCos;
    return std::nullopt;
}

namespace {

void check_vector(const std::vector<double>& v, std::optional<std::size_t>& dimension, const std::string& key) {
    if (v.empty()) throw ValidationError("empty vector for " + key);
    for (double x : v) {
        if (!std::isfinite(x)) throw ValidationError("non-finite value in vector for " + key);
    }
    if (dimension && *dimension != v.size()) {
        throw ValidationError("ragged dimensions: " + key + " has " + std::to_string(v.size()) +
                              " components, expected " + std::to_string(*dimension));
    }
    dimension = v.size();
}

}  // namespace

void WordVectorTable::add(std::string token, std::vector<double> vector) {
    for (auto& c : token) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
    }
    check_vector(vector, dimension_, "token '" + token + "'");
    if (!entries_.emplace(token, std::move(vector)).second) {
        throw ValidationError("duplicate word vector for '" + token + "'");
    }
}

const std::vector<double>* WordVectorTable::find(std::string_view token) const {
    auto it = entries_.find(std::string(token));
    return it == entries_.end() ? nullptr : &it->second;
}

void SentenceEmbeddingStore::add(std::string doc_id, std::size_t sentence_index, std::vector<double> vector) {
    const std::string key = "(" + doc_id + ", " + std::to_string(sentence_index) + ")";
    check_vector(vector, dimension_, key);
    if (!entries_.emplace(std::make_pair(std::move(doc_id), sentence_index), std::move(vector)).second) {
        throw ValidationError("duplicate sentence embedding " + key);
    }
}

const std::vector<double>* SentenceEmbeddingStore::find(std::string_view doc_id, std::size_t sentence_index) const {
    auto it = entries_.find(std::make_pair(std::string(doc_id), sentence_index));
    return it == entries_.end() ? nullptr : &it->second;
}

void SentenceEmbeddingStore::check_against(const Corpus& corpus) const {
    for (const auto& [key, _] : entries_) {
        const Document* doc = corpus.find(key.first);
        if (!doc || key.second >= doc->sentences.size()) {
            throw ValidationError("sentence embedding (" + key.first + ", " + std::to_string(key.second) +
                                  ") does not match a corpus sentence");
        }
    }
}

WordVectorTable load_word_vectors(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("cannot read word vectors " + path.string());
    WordVectorTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string token;
        if (!(fields >> token)) continue;
        std::vector<double> values;
        std::string field;
        while (fields >> field) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(field, &used));
                if (used != field.size()) throw std::invalid_argument(field);
            } catch (const std::logic_error&) {
                throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": bad number '" +
                                      field + "'");
            }
        }
        try {
            table.add(std::move(token), std::move(values));
        } catch (const ValidationError& e) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return table;
}

SentenceEmbeddingStore load_sentence_embeddings(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("cannot read sentence embeddings " + path.string());
    SentenceEmbeddingStore store;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            store.add(j.at("doc_id").get<std::string>(), j.at("sentence_index").get<std::size_t>(),
                      j.at("vector").get<std::vector<double>>());
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return store;
}

void SimilarityContext::require(SimilarityMethod method) const {
    if (method == SimilarityMethod::WordvecCos && !word_vectors) {
        throw ResourceError("wordvec_cos requires a word-vector table");
    }
    if (method == SimilarityMethod::SentvecCos && !sentence_embeddings) {
        throw ResourceError("sentvec_cos requires a sentence-embedding store");
    }
}

double js_distance(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw ValidationError("js_distance: length mismatch " + std::to_string(p.size()) + " vs " +
                              std::to_string(q.size()));
    }
    double sum_p = 0.0;
    double sum_q = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] >= 0.0) || !(q[i] >= 0.0)) throw ValidationError("js_distance: negative probability");
        sum_p += p[i];
        sum_q += q[i];
    }
    if (std::abs(sum_p - 1.0) > 1e-9 || std::abs(sum_q - 1.0) > 1e-9) {
        throw ValidationError("js_distance: inputs must sum to 1");
    }
    // Each component contributes symmetrically, so js(p, q) == js(q, p) bit for bit.
    double divergence = 0.0;
    bool shared = false;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double m = 0.5 * (p[i] + q[i]);
        if (m == 0.0) continue;
        shared = shared || (p[i] > 0.0 && q[i] > 0.0);
        const double kp = p[i] > 0.0 ? p[i] * std::log2(p[i] / m) : 0.0;
        const double kq = q[i] > 0.0 ? q[i] * std::log2(q[i] / m) : 0.0;
        divergence += 0.5 * (kp + kq);
    }
    // Disjoint supports are exactly distance 1; summing the terms can land an ulp short.
    if (!shared) return 1.0;
    if (divergence <= 0.0) return 0.0;
    return std::min(1.0, std::sqrt(divergence));
}

double bow_similarity(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() || b.empty()) return 0.0;
    // Sorted union vocabulary keeps component order independent of argument order.
    std::map<std::string_view, std::pair<double, double>> counts;
    for (const auto& t : a) counts[t].first += 1.0;
    for (const auto& t : b) counts[t].second += 1.0;
    std::vector<double> p;
    std::vector<double> q;
    p.reserve(counts.size());
    q.reserve(counts.size());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    for (const auto& [_, c] : counts) {
        p.push_back(c.first / na);
        q.push_back(c.second / nb);
    }
    return 1.0 - js_distance(p, q);
}

double bow_similarity(const Sentence& a, const Sentence& b) { return bow_similarity(a.tokens, b.tokens); }

double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw ValidationError("cosine: dimension mismatch " + std::to_string(u.size()) + " vs " +
                              std::to_string(v.size()));
    }
    double dot = 0.0;
    double nu = 0.0;
    double nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) return 0.0;
    const double c = dot / (std::sqrt(nu) * std::sqrt(nv));
    return std::clamp(c, -1.0, 1.0);
}

std::vector<double> mean_word_vector(const std::vector<std::string>& tokens, const WordVectorTable& table) {
    if (!table.dimension()) throw ResourceError("word-vector table is empty; dimension undefined");
    std::vector<double> mean(*table.dimension(), 0.0);
    std::size_t found = 0;
    for (const auto& t : tokens) {
        const auto* v = table.find(t);
        if (!v) continue;
        for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += (*v)[k];
        ++found;
    }
    if (found > 0) {
        for (auto& x : mean) x /= static_cast<double>(found);
    }
    return mean;
}

SentenceEncoder::SentenceEncoder(SimilarityMethod method, const SimilarityContext& context)
    : method_(method), context_(context) {
    context_.require(method_);
}

SentenceEncoder::Encoded SentenceEncoder::encode(SentenceRef ref) const {
    Encoded e;
    const Sentence& s = ref.sentence();
    switch (method_) {
        case SimilarityMethod::BowJsd:
            e.tokens = &s.tokens;
            break;
        case SimilarityMethod::WordvecCos:
            e.owned = mean_word_vector(s.tokens, *context_.word_vectors);
            break;
        case SimilarityMethod::SentvecCos:
            e.borrowed = context_.sentence_embeddings->find(ref.doc->id, ref.index);
            if (!e.borrowed) throw MissingVectorError(ref.doc->id, ref.index);
            break;
    }
    return e;
}

double SentenceEncoder::similarity(const Encoded& a, const Encoded& b) const {
    if (method_ == SimilarityMethod::BowJsd) return bow_similarity(*a.tokens, *b.tokens);
    return clamp_similarity(cosine(a.vector(), b.vector()));
}

double pair_similarity(SimilarityMethod method, const SimilarityContext& context, SentenceRef a, SentenceRef b) {
    const SentenceEncoder encoder(method, context);
    return encoder.similarity(encoder.encode(a), encoder.encode(b));
}

}  // namespace prominence
