#include "prominence/experiment.hpp"

#include "prominence/error.hpp"
#include "prominence/parallel.hpp"
#include "prominence/random.hpp"
#include "prominence/version.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace prominence {

using nlohmann::json;

void ExperimentConfig::validate() const {
    if (methods.empty()) throw ValidationError("experiment needs at least one similarity method");
    if (rankers.empty()) throw ValidationError("experiment needs at least one ranker");
    for (auto m : methods) {
        if (m == SimilarityMethod::WordvecCos && !word_vectors_path) {
            throw ValidationError("wordvec_cos requires a word-vector file");
        }
        if (m == SimilarityMethod::SentvecCos && !sentence_embeddings_path) {
            throw ValidationError("sentvec_cos requires a sentence-embedding file");
        }
    }
    rank.validate();
}

const RunSummary* ExperimentReport::find(SimilarityMethod method, Ranker ranker) const {
    for (const auto& r : runs) {
        if (r.method == method && r.ranker == ranker) return &r;
    }
    return nullptr;
}

namespace {

struct PairOutcome {
    std::optional<std::string> skip_reason;
    std::vector<GroupSimilarity> per_run;  // methods x rankers, method-major
};

std::optional<std::string> skip_reason(const Document& news, const Document& paper) {
    if (!paper.coresc_labels) return "paper has no CoreSC labels";
    if (paper.sentences.empty()) return "paper has no sentences";
    if (news.sentences.empty()) return "news article has no sentences";
    return std::nullopt;
}

}  // namespace

ExperimentReport run_experiment(const Corpus& corpus, const CollectionPartition& partition,
                                const ExperimentConfig& config, const SimilarityContext& context) {
    if (config.methods.empty()) throw ValidationError("experiment needs at least one similarity method");
    if (config.rankers.empty()) throw ValidationError("experiment needs at least one ranker");
    for (auto m : config.methods) context.require(m);
    RankConfig rank = config.rank;
    rank.random_seed = config.seed;
    rank.validate();

    std::vector<std::pair<CollectionLabel, const DocumentPair*>> pairs;
    for (const auto& p : partition.linked.pairs) pairs.emplace_back(CollectionLabel::FLinked, &p);
    for (const auto& p : partition.unlinked.pairs) pairs.emplace_back(CollectionLabel::DUnlinked, &p);

    std::vector<PairOutcome> outcomes(pairs.size());
    parallel_for(pairs.size(), config.jobs, [&](std::size_t k) {
        const Document& news = corpus.at(pairs[k].second->news_id);
        const Document& paper = corpus.at(pairs[k].second->paper_id);
        auto& out = outcomes[k];
        out.skip_reason = skip_reason(news, paper);
        if (out.skip_reason) return;
        out.per_run.reserve(config.methods.size() * config.rankers.size());
        for (auto method : config.methods) {
            for (auto ranker : config.rankers) {
                const auto prominent = prominent_sentences(ranker, news, method, context, rank);
                out.per_run.push_back(group_similarity(news, paper, prominent, method, context, ranker));
            }
        }
    });

    ExperimentReport report;
    report.tool_version = kToolVersion;
    report.seed = config.seed;
    report.config = config;
    report.config.rank = rank;
    report.config.bootstrap.seed = config.seed;
    report.total_pairs = pairs.size();
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (outcomes[k].skip_reason) report.skipped.push_back({*pairs[k].second, *outcomes[k].skip_reason});
    }

    std::size_t run_index = 0;
    for (auto method : config.methods) {
        for (auto ranker : config.rankers) {
            RunSummary run;
            run.method = method;
            run.ranker = ranker;
            std::array<double, kCoreSCGroupCount> sum_f{}, sum_d{};
            for (std::size_t k = 0; k < pairs.size(); ++k) {
                if (outcomes[k].skip_reason) {
                    ++run.skipped;
                    continue;
                }
                const bool linked = pairs[k].first == CollectionLabel::FLinked;
                ++(linked ? run.n_pairs_F : run.n_pairs_D);
                const auto& gs = outcomes[k].per_run[run_index];
                for (std::size_t g = 0; g < kCoreSCGroupCount; ++g) {
                    if (!gs.groups[g].mean) continue;
                    if (linked) {
                        sum_f[g] += *gs.groups[g].mean;
                        ++run.cells[g].n_pairs_F;
                    } else {
                        sum_d[g] += *gs.groups[g].mean;
                        ++run.cells[g].n_pairs_D;
                    }
                }
            }
            for (std::size_t g = 0; g < kCoreSCGroupCount; ++g) {
                auto& cell = run.cells[g];
                cell.group = kAllGroups[g];
                if (cell.n_pairs_F > 0) cell.mean_F = sum_f[g] / static_cast<double>(cell.n_pairs_F);
                if (cell.n_pairs_D > 0) cell.mean_D = sum_d[g] / static_cast<double>(cell.n_pairs_D);
                if (cell.mean_F && cell.mean_D && *cell.mean_D > 0.0) {
                    cell.percent_diff = percent_difference(*cell.mean_F, *cell.mean_D);
                }
            }
            report.runs.push_back(run);
            ++run_index;
        }
    }

    bool has_case_studies = false;
    for (const auto& d : corpus.documents()) has_case_studies |= d.kind == DocumentKind::CaseStudy;
    if (has_case_studies && !corpus.uoa_results().empty()) {
        try {
            BootstrapConfig boot = config.bootstrap;
            boot.seed = config.seed;
            boot.jobs = config.jobs;
            report.impact = compare_impact_distributions(corpus, boot);
        } catch (const ValidationError& e) {
            report.impact_notice = std::string("impact comparison not run: ") + e.what();
        }
    } else {
        report.impact_notice = "impact comparison not run: corpus has no scored case studies";
    }
    return report;
}

ExperimentReport run_experiment(const Corpus& corpus, const ExperimentConfig& config,
                                const SimilarityContext& context) {
    return run_experiment(corpus, partition_collections(corpus), config, context);
}

ExperimentReport run_experiment(const Corpus& corpus, const ExperimentConfig& config) {
    config.validate();
    std::optional<WordVectorTable> words;
    std::optional<SentenceEmbeddingStore> sentences;
    SimilarityContext context;
    if (config.word_vectors_path) {
        words = load_word_vectors(*config.word_vectors_path);
        context.word_vectors = &*words;
    }
    const Corpus labeled = config.coresc_labels_path ? load_coresc_labels(*config.coresc_labels_path, corpus) : corpus;
    if (config.sentence_embeddings_path) {
        sentences = load_sentence_embeddings(*config.sentence_embeddings_path);
        sentences->check_against(labeled);
        context.sentence_embeddings = &*sentences;
    }
    return run_experiment(labeled, config, context);
}

ImpactComparison compare_impact_distributions(const Corpus& corpus, const BootstrapConfig& bootstrap) {
    std::set<std::string_view> news_linked_papers;
    for (const auto& l : corpus.links()) {
        if (corpus.at(l.source_id).kind == DocumentKind::News) news_linked_papers.insert(l.target_id);
    }
    std::set<std::string_view> linked_case_studies;
    for (const auto& l : corpus.links()) {
        const auto& source = corpus.at(l.source_id);
        if (source.kind != DocumentKind::CaseStudy) continue;
        const auto& target = corpus.at(l.target_id);
        if (target.kind == DocumentKind::News || news_linked_papers.contains(target.id)) {
            linked_case_studies.insert(source.id);
        }
    }

    ImpactComparison out;
    SampleSet linked{"news_linked", {}};
    SampleSet unlinked{"not_news_linked", {}};
    for (const auto& d : corpus.documents()) {
        if (d.kind != DocumentKind::CaseStudy) continue;
        const UoAResult* uoa = (d.institution && d.uoa) ? corpus.find_uoa(*d.institution, *d.uoa) : nullptr;
        double score = 0.0;
        try {
            if (!uoa) throw ValidationError("no UoA result");
            score = mean_uoa_score(*uoa);
        } catch (const ValidationError&) {
            ++out.unscored;
            continue;
        }
        (linked_case_studies.contains(d.id) ? linked : unlinked).values.push_back(score);
    }
    if (out.unscored > 0) {
        out.notices.push_back(std::to_string(out.unscored) + " case studies have no usable UoA score");
    }
    linked.validate();
    unlinked.validate();
    out.n_linked = linked.values.size();
    out.n_unlinked = unlinked.values.size();

    for (const auto* set : {&linked, &unlinked}) {
        auto& slot = set == &linked ? out.normality_linked : out.normality_unlinked;
        if (set->values.size() < kNormalityMinSamples) {
            out.notices.push_back("normality test skipped for " + set->label + ": " +
                                  std::to_string(set->values.size()) + " scores, need " +
                                  std::to_string(kNormalityMinSamples));
            continue;
        }
        try {
            slot = dagostino_pearson(*set);
        } catch (const ValidationError& e) {
            out.notices.push_back("normality test skipped for " + set->label + ": " + e.what());
        }
    }
    out.ks = ks2_test(linked, unlinked);
    out.bootstrap = bootstrap_mean_diff(linked, unlinked, bootstrap);
    return out;
}

ReportFormat parse_report_format(std::string_view name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "tsv") return ReportFormat::Tsv;
    if (name == "all") return ReportFormat::All;
    throw ValidationError("unknown report format '" + std::string(name) + "' (expected json, csv, tsv or all)");
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> number_or_null(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

std::string format_number(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

template <typename Enum, typename Parser>
Enum parse_or_throw(const std::string& s, Parser parse, const char* what) {
    auto v = parse(s);
    if (!v) throw ValidationError(std::string("unknown ") + what + " '" + s + "'");
    return *v;
}

TestResult test_result_from_json(const json& j) {
    TestResult r;
    r.method = j.at("method").get<std::string>();
    r.statistic = j.at("statistic").get<double>();
    r.p_value = j.at("p_value").get<double>();
    r.n1 = j.at("n1").get<std::size_t>();
    if (j.contains("n2") && !j.at("n2").is_null()) r.n2 = j.at("n2").get<std::size_t>();
    return r;
}

}  // namespace

json to_json(const TestResult& r) {
    json j;
    j["method"] = r.method;
    j["statistic"] = r.statistic;
    j["p_value"] = r.p_value;
    j["n1"] = r.n1;
    j["n2"] = r.n2 ? json(*r.n2) : json(nullptr);
    return j;
}

json to_json(const BootstrapCI& ci) {
    return {{"low", ci.low},           {"high", ci.high}, {"level", ci.level},
            {"resamples", ci.resamples}, {"seed", ci.seed}, {"observed", ci.observed},
            {"method", "percentile_bootstrap_mean_diff"}};
}

json to_json(const ImpactComparison& c) {
    json j;
    j["n_linked"] = c.n_linked;
    j["n_unlinked"] = c.n_unlinked;
    j["unscored"] = c.unscored;
    j["normality_linked"] = c.normality_linked ? to_json(*c.normality_linked) : json(nullptr);
    j["normality_unlinked"] = c.normality_unlinked ? to_json(*c.normality_unlinked) : json(nullptr);
    j["ks"] = to_json(c.ks);
    j["bootstrap"] = to_json(c.bootstrap);
    j["notices"] = c.notices;
    return j;
}

json report_to_json(const ExperimentReport& report) {
    json j;
    j["tool"] = "prominence";
    j["tool_version"] = report.tool_version;
    j["seed"] = report.seed;
    j["rng"] = kRngAlgorithm;
    j["percent_diff_definition"] = kPercentDiffDefinition;
    j["aggregation"] = kAggregationDefinition;

    const auto& c = report.config;
    json config;
    config["methods"] = json::array();
    for (auto m : c.methods) config["methods"].push_back(std::string(to_string(m)));
    config["rankers"] = json::array();
    for (auto r : c.rankers) config["rankers"].push_back(std::string(to_string(r)));
    config["damping"] = c.rank.damping;
    config["max_iterations"] = c.rank.max_iterations;
    config["convergence_threshold"] = c.rank.convergence_threshold;
    config["top_n"] = c.rank.top_n;
    config["bootstrap_level"] = c.bootstrap.level;
    config["bootstrap_resamples"] = c.bootstrap.resamples;
    auto path_or_null = [](const std::optional<std::filesystem::path>& p) {
        return p ? json(p->generic_string()) : json(nullptr);
    };
    config["word_vectors"] = path_or_null(c.word_vectors_path);
    config["sentence_embeddings"] = path_or_null(c.sentence_embeddings_path);
    config["coresc_labels"] = path_or_null(c.coresc_labels_path);
    j["config"] = std::move(config);

    json skipped = json::array();
    for (const auto& s : report.skipped) {
        skipped.push_back({{"news_id", s.pair.news_id}, {"paper_id", s.pair.paper_id}, {"reason", s.reason}});
    }
    j["pairs"] = {{"total", report.total_pairs}, {"skipped", std::move(skipped)}};

    json runs = json::array();
    for (const auto& run : report.runs) {
        json cells = json::array();
        for (const auto& cell : run.cells) {
            cells.push_back({{"group", std::string(to_string(cell.group))},
                             {"mean_F", optional_number(cell.mean_F)},
                             {"mean_D", optional_number(cell.mean_D)},
                             {"n_pairs_F", cell.n_pairs_F},
                             {"n_pairs_D", cell.n_pairs_D},
                             {"percent_diff", optional_number(cell.percent_diff)}});
        }
        runs.push_back({{"method", std::string(to_string(run.method))},
                        {"ranker", std::string(to_string(run.ranker))},
                        {"n_pairs_F", run.n_pairs_F},
                        {"n_pairs_D", run.n_pairs_D},
                        {"skipped", run.skipped},
                        {"cells", std::move(cells)}});
    }
    j["runs"] = std::move(runs);
    j["impact"] = report.impact ? to_json(*report.impact) : json(nullptr);
    j["impact_notice"] = report.impact_notice ? json(*report.impact_notice) : json(nullptr);
    return j;
}

ExperimentReport report_from_json(const json& j) {
    try {
        ExperimentReport r;
        r.tool_version = j.at("tool_version").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        const auto& c = j.at("config");
        r.config.methods.clear();
        for (const auto& m : c.at("methods")) {
            r.config.methods.push_back(
                parse_or_throw<SimilarityMethod>(m.get<std::string>(), parse_similarity_method, "method"));
        }
        r.config.rankers.clear();
        for (const auto& k : c.at("rankers")) {
            r.config.rankers.push_back(parse_or_throw<Ranker>(k.get<std::string>(), parse_ranker, "ranker"));
        }
        r.config.seed = r.seed;
        r.config.rank.damping = c.at("damping").get<double>();
        r.config.rank.max_iterations = c.at("max_iterations").get<std::size_t>();
        r.config.rank.convergence_threshold = c.at("convergence_threshold").get<double>();
        r.config.rank.top_n = c.at("top_n").get<std::size_t>();
        r.config.rank.random_seed = r.seed;
        r.config.bootstrap.level = c.at("bootstrap_level").get<double>();
        r.config.bootstrap.resamples = c.at("bootstrap_resamples").get<std::size_t>();
        r.config.bootstrap.seed = r.seed;
        auto path = [&](const char* key) -> std::optional<std::filesystem::path> {
            if (!c.contains(key) || c.at(key).is_null()) return std::nullopt;
            return std::filesystem::path(c.at(key).get<std::string>());
        };
        r.config.word_vectors_path = path("word_vectors");
        r.config.sentence_embeddings_path = path("sentence_embeddings");
        r.config.coresc_labels_path = path("coresc_labels");

        r.total_pairs = j.at("pairs").at("total").get<std::size_t>();
        for (const auto& s : j.at("pairs").at("skipped")) {
            r.skipped.push_back({DocumentPair{s.at("news_id").get<std::string>(), s.at("paper_id").get<std::string>()},
                                 s.at("reason").get<std::string>()});
        }
        for (const auto& run_j : j.at("runs")) {
            RunSummary run;
            run.method = parse_or_throw<SimilarityMethod>(run_j.at("method").get<std::string>(),
                                                          parse_similarity_method, "method");
            run.ranker = parse_or_throw<Ranker>(run_j.at("ranker").get<std::string>(), parse_ranker, "ranker");
            run.n_pairs_F = run_j.at("n_pairs_F").get<std::size_t>();
            run.n_pairs_D = run_j.at("n_pairs_D").get<std::size_t>();
            run.skipped = run_j.at("skipped").get<std::size_t>();
            const auto& cells = run_j.at("cells");
            if (cells.size() != kCoreSCGroupCount) throw ValidationError("report run must have 4 cells");
            for (std::size_t g = 0; g < kCoreSCGroupCount; ++g) {
                const auto& cj = cells[g];
                auto& cell = run.cells[g];
                cell.group = parse_or_throw<CoreSCGroup>(cj.at("group").get<std::string>(), parse_coresc_group,
                                                         "CoreSC group");
                cell.mean_F = number_or_null(cj.at("mean_F"));
                cell.mean_D = number_or_null(cj.at("mean_D"));
                cell.n_pairs_F = cj.at("n_pairs_F").get<std::size_t>();
                cell.n_pairs_D = cj.at("n_pairs_D").get<std::size_t>();
                cell.percent_diff = number_or_null(cj.at("percent_diff"));
            }
            r.runs.push_back(run);
        }
        if (!j.at("impact").is_null()) {
            const auto& ij = j.at("impact");
            ImpactComparison ic;
            ic.n_linked = ij.at("n_linked").get<std::size_t>();
            ic.n_unlinked = ij.at("n_unlinked").get<std::size_t>();
            ic.unscored = ij.at("unscored").get<std::size_t>();
            if (!ij.at("normality_linked").is_null()) ic.normality_linked = test_result_from_json(ij.at("normality_linked"));
            if (!ij.at("normality_unlinked").is_null()) {
                ic.normality_unlinked = test_result_from_json(ij.at("normality_unlinked"));
            }
            ic.ks = test_result_from_json(ij.at("ks"));
            const auto& bj = ij.at("bootstrap");
            ic.bootstrap.low = bj.at("low").get<double>();
            ic.bootstrap.high = bj.at("high").get<double>();
            ic.bootstrap.level = bj.at("level").get<double>();
            ic.bootstrap.resamples = bj.at("resamples").get<std::size_t>();
            ic.bootstrap.seed = bj.at("seed").get<std::uint64_t>();
            ic.bootstrap.observed = bj.at("observed").get<double>();
            ic.notices = ij.at("notices").get<std::vector<std::string>>();
            r.impact = std::move(ic);
        }
        if (!j.at("impact_notice").is_null()) r.impact_notice = j.at("impact_notice").get<std::string>();
        return r;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed report JSON: ") + e.what());
    }
}

std::string render_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "# percent_diff = " << kPercentDiffDefinition << '\n';
    out << "method,ranker";
    for (auto g : kAllGroups) out << ',' << to_string(g);
    out << '\n';
    for (const auto& run : report.runs) {
        out << to_string(run.method) << ',' << to_string(run.ranker);
        for (const auto& cell : run.cells) out << ',' << format_optional(cell.percent_diff);
        out << '\n';
    }
    return out.str();
}

std::string render_plot_tsv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "method\tranker\tgroup\tcollection\tmean\tn_pairs\tpercent_diff\n";
    for (const auto& run : report.runs) {
        for (const auto& cell : run.cells) {
            for (auto label : {CollectionLabel::FLinked, CollectionLabel::DUnlinked}) {
                const bool f = label == CollectionLabel::FLinked;
                out << to_string(run.method) << '\t' << to_string(run.ranker) << '\t' << to_string(cell.group)
                    << '\t' << to_string(label) << '\t' << format_optional(f ? cell.mean_F : cell.mean_D) << '\t'
                    << (f ? cell.n_pairs_F : cell.n_pairs_D) << '\t' << format_optional(cell.percent_diff) << '\n';
            }
        }
    }
    return out.str();
}

std::vector<std::filesystem::path> emit_report(const ExperimentReport& report, const std::filesystem::path& out_dir,
                                               ReportFormat format) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw ResourceError("cannot create output directory " + out_dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> written;
    auto write = [&](const char* name, const std::string& content) {
        const auto path = out_dir / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw ResourceError("cannot write " + path.string());
        out << content;
        out.close();
        if (!out) throw ResourceError("failed writing " + path.string());
        written.push_back(path);
    };
    if (format == ReportFormat::Json || format == ReportFormat::All) {
        write("report.json", report_to_json(report).dump(2) + "\n");
    }
    if (format == ReportFormat::Csv || format == ReportFormat::All) write("figure3.csv", render_csv(report));
    if (format == ReportFormat::Tsv || format == ReportFormat::All) write("plot_data.tsv", render_plot_tsv(report));
    return written;
}

}  // namespace prominence
