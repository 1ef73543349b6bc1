#include "prominence/coresc.hpp"

#include "prominence/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <map>

namespace prominence {

namespace {

// Indexed by CoreSCCategory value.
constexpr std::array<std::string_view, kCoreSCCategoryCount> kCategoryNames = {
    "Background", "Motivation", "Goal",  "Object", "Hypothesis", "Method",
    "Experiment", "Model",      "Observation", "Result", "Conclusion"};

}  // namespace

std::string_view to_string(CoreSCCategory category) noexcept {
    const auto i = static_cast<std::size_t>(category);
    return i < kCategoryNames.size() ? kCategoryNames[i] : "?";
}

std::string_view to_string(CoreSCGroup group) noexcept {
    switch (group) {
        case CoreSCGroup::Background: return "Background";
        case CoreSCGroup::Goals: return "Goals";
        case CoreSCGroup::Method: return "Method";
        case CoreSCGroup::Outcomes: return "Outcomes";
    }
    return "?";
}

std::optional<CoreSCCategory> parse_coresc_category(std::string_view label) noexcept {
    for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
        if (kCategoryNames[i] == label) return static_cast<CoreSCCategory>(i);
    }
    // SAPIENTA output uses three-letter codes; the long forms above are canonical.
    static constexpr std::array<std::pair<std::string_view, CoreSCCategory>, 13> kAliases = {{
        {"Objective", CoreSCCategory::Object},   {"Objectives", CoreSCCategory::Object},
        {"Bac", CoreSCCategory::Background},     {"Mot", CoreSCCategory::Motivation},
        {"Goa", CoreSCCategory::Goal},           {"Obj", CoreSCCategory::Object},
        {"Hyp", CoreSCCategory::Hypothesis},     {"Met", CoreSCCategory::Method},
        {"Exp", CoreSCCategory::Experiment},     {"Mod", CoreSCCategory::Model},
        {"Obs", CoreSCCategory::Observation},    {"Res", CoreSCCategory::Result},
        {"Con", CoreSCCategory::Conclusion},
    }};
    for (const auto& [alias, category] : kAliases) {
        if (alias == label) return category;
    }
    return std::nullopt;
}

std::optional<CoreSCGroup> parse_coresc_group(std::string_view name) noexcept {
    for (auto g : kAllGroups) {
        if (to_string(g) == name) return g;
    }
    return std::nullopt;
}

GroupSimilarity group_similarity(const Document& news, const Document& paper,
                                 const std::vector<std::size_t>& prominent, SimilarityMethod method,
                                 const SimilarityContext& context, Ranker ranker) {
    if (!paper.coresc_labels) throw ValidationError("paper " + paper.id + " has no CoreSC labels");
    if (prominent.empty()) throw ValidationError("no prominent news sentences for " + news.id);

    const SentenceEncoder encoder(method, context);
    std::vector<SentenceEncoder::Encoded> news_encoded;
    news_encoded.reserve(prominent.size());
    for (std::size_t idx : prominent) {
        if (idx >= news.sentences.size()) {
            throw ValidationError("prominent index " + std::to_string(idx) + " out of range for " + news.id);
        }
        news_encoded.push_back(encoder.encode(SentenceRef{&news, idx}));
    }

    GroupSimilarity out;
    out.pair = DocumentPair{news.id, paper.id};
    out.method = method;
    out.ranker = ranker;
    std::array<double, kCoreSCGroupCount> sums{};
    for (std::size_t s = 0; s < paper.sentences.size(); ++s) {
        const auto g = static_cast<std::size_t>(map_group((*paper.coresc_labels)[s]));
        const auto paper_encoded = encoder.encode(SentenceRef{&paper, s});
        for (const auto& n : news_encoded) {
            const double sim = encoder.similarity(n, paper_encoded);
            sums[g] += sim;
            auto& stats = out.groups[g];
            stats.max = stats.max ? std::max(*stats.max, sim) : sim;
            ++stats.count;
        }
    }
    for (std::size_t g = 0; g < kCoreSCGroupCount; ++g) {
        if (out.groups[g].count > 0) out.groups[g].mean = sums[g] / static_cast<double>(out.groups[g].count);
    }
    return out;
}

Corpus load_coresc_labels(std::istream& in, const Corpus& corpus) {
    std::map<std::string, std::vector<CoreSCCategory>> labels_by_doc;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = "labels line " + std::to_string(line_no) + ": ";
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
            const auto doc_id = j.at("doc_id").get<std::string>();
            const Document* doc = corpus.find(doc_id);
            if (!doc) throw ValidationError("unknown doc_id " + doc_id);
            std::vector<CoreSCCategory> labels;
            for (const auto& l : j.at("labels")) {
                const auto name = l.get<std::string>();
                auto category = parse_coresc_category(name);
                if (!category) throw ValidationError("unknown CoreSC category '" + name + "'");
                labels.push_back(*category);
            }
            if (labels.size() != doc->sentences.size()) {
                throw ValidationError(doc_id + ": " + std::to_string(labels.size()) + " labels for " +
                                      std::to_string(doc->sentences.size()) + " sentences");
            }
            if (!labels_by_doc.emplace(doc_id, std::move(labels)).second) {
                throw ValidationError("duplicate labels for " + doc_id);
            }
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(where + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError(where + e.what());
        }
    }
    auto documents = corpus.documents();
    for (auto& d : documents) {
        if (auto it = labels_by_doc.find(d.id); it != labels_by_doc.end()) d.coresc_labels = std::move(it->second);
    }
    return Corpus(std::move(documents), corpus.links(), corpus.uoa_results());
}

Corpus load_coresc_labels(const std::filesystem::path& path, const Corpus& corpus) {
    std::ifstream in(path);
    if (!in) throw ResourceError("cannot read CoreSC labels " + path.string());
    return load_coresc_labels(in, corpus);
}

}  // namespace prominence
