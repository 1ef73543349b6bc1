#pragma once

#include "prominence/coresc.hpp"
#include "prominence/corpus.hpp"
#include "prominence/semsimrank.hpp"
#include "prominence/similarity.hpp"
#include "prominence/stats.hpp"

#include "json.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace prominence {

struct ExperimentConfig {
    std::vector<SimilarityMethod> methods{SimilarityMethod::BowJsd};
    std::vector<Ranker> rankers{Ranker::SemSimRank, Ranker::FirstSentence, Ranker::RandomSentence};
    RankConfig rank;
    BootstrapConfig bootstrap;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    std::optional<std::filesystem::path> word_vectors_path;
    std::optional<std::filesystem::path> sentence_embeddings_path;
    std::optional<std::filesystem::path> coresc_labels_path;

    /// At least one method and ranker; embedding methods need their paths.
    void validate() const;
};

struct ReportCell {
    CoreSCGroup group = CoreSCGroup::Background;
    std::optional<double> mean_F;
    std::optional<double> mean_D;
    std::size_t n_pairs_F = 0;  // pairs contributing to this group
    std::size_t n_pairs_D = 0;
    std::optional<double> percent_diff;
};

struct RunSummary {
    SimilarityMethod method = SimilarityMethod::BowJsd;
    Ranker ranker = Ranker::SemSimRank;
    std::size_t n_pairs_F = 0;  // pairs processed
    std::size_t n_pairs_D = 0;
    std::size_t skipped = 0;
    std::array<ReportCell, kCoreSCGroupCount> cells{};

    const ReportCell& operator[](CoreSCGroup g) const { return cells[static_cast<std::size_t>(g)]; }
};

struct SkippedPair {
    DocumentPair pair;
    std::string reason;
};

struct ImpactComparison {
    std::size_t n_linked = 0;
    std::size_t n_unlinked = 0;
    std::size_t unscored = 0;  // case studies without a usable UoA score
    std::optional<TestResult> normality_linked;
    std::optional<TestResult> normality_unlinked;
    TestResult ks;
    BootstrapCI bootstrap;
    std::vector<std::string> notices;
};

struct ExperimentReport {
    std::string tool_version;
    std::uint64_t seed = 0;
    ExperimentConfig config;
    std::size_t total_pairs = 0;
    std::vector<SkippedPair> skipped;
    std::vector<RunSummary> runs;
    std::optional<ImpactComparison> impact;
    std::optional<std::string> impact_notice;

    const RunSummary* find(SimilarityMethod method, Ranker ranker) const;
};

inline constexpr const char* kPercentDiffDefinition = "100 * (mean_F - mean_D) / mean_D";
inline constexpr const char* kAggregationDefinition =
    "mean over news-paper sentence comparisons within each pair and group, then unweighted mean over pairs";

/// Runs every (method, ranker) over the F and D pairs of `partition`.
ExperimentReport run_experiment(const Corpus& corpus, const CollectionPartition& partition,
                                const ExperimentConfig& config, const SimilarityContext& context);

ExperimentReport run_experiment(const Corpus& corpus, const ExperimentConfig& config,
                                const SimilarityContext& context);

/// Loads the resources named in `config`, attaches CoreSC labels if a path
/// is given, and runs the experiment.
ExperimentReport run_experiment(const Corpus& corpus, const ExperimentConfig& config);

/// Case studies that link a news article (or a paper that news links to)
/// versus the rest, scored by their UoA mean star rating.
ImpactComparison compare_impact_distributions(const Corpus& corpus, const BootstrapConfig& bootstrap = {});

enum class ReportFormat { Json, Csv, Tsv, All };

/// Throws ValidationError for unknown names.
ReportFormat parse_report_format(std::string_view name);

nlohmann::json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& j);

std::string render_csv(const ExperimentReport& report);
std::string render_plot_tsv(const ExperimentReport& report);

/// Writes report.json, figure3.csv and/or plot_data.tsv into `out_dir`.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report, const std::filesystem::path& out_dir,
                                               ReportFormat format = ReportFormat::All);

nlohmann::json to_json(const TestResult& r);
nlohmann::json to_json(const BootstrapCI& ci);
nlohmann::json to_json(const ImpactComparison& c);

}  // namespace prominence
