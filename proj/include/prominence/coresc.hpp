#pragma once

#include "prominence/corpus.hpp"
#include "prominence/coresc_scheme.hpp"
#include "prominence/semsimrank.hpp"
#include "prominence/similarity.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <vector>

namespace prominence {

struct GroupStats {
    std::optional<double> mean;  // absent when the paper has no sentence in the group
    std::optional<double> max;
    std::size_t count = 0;
};

struct GroupSimilarity {
    DocumentPair pair;
    SimilarityMethod method = SimilarityMethod::BowJsd;
    Ranker ranker = Ranker::SemSimRank;
    std::array<GroupStats, kCoreSCGroupCount> groups{};

    const GroupStats& operator[](CoreSCGroup g) const { return groups[static_cast<std::size_t>(g)]; }
};

/// Compares every labeled paper sentence with every prominent news sentence
/// and aggregates the similarities by CoreSC group.
GroupSimilarity group_similarity(const Document& news, const Document& paper,
                                 const std::vector<std::size_t>& prominent, SimilarityMethod method,
                                 const SimilarityContext& context, Ranker ranker = Ranker::SemSimRank);

/// Attaches labels from JSONL lines {"doc_id", "labels": [...]}.
Corpus load_coresc_labels(const std::filesystem::path& path, const Corpus& corpus);
Corpus load_coresc_labels(std::istream& in, const Corpus& corpus);

}  // namespace prominence
