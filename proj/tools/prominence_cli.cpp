// Command-line front end: corpus ingest, DOI link extraction, sentence
// ranking, the F/D experiment, impact statistics and report re-emission.

#include "prominence/coresc.hpp"
#include "prominence/corpus.hpp"
#include "prominence/error.hpp"
#include "prominence/experiment.hpp"
#include "prominence/linkextract.hpp"
#include "prominence/semsimrank.hpp"
#include "prominence/similarity.hpp"
#include "prominence/stats.hpp"
#include "prominence/version.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace prominence;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitResource = 3;

struct GlobalOptions {
    std::string corpus;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    std::string out;
    std::string stopwords;
    std::string abbreviations;
};

TextConfig text_config(const GlobalOptions& g) {
    TextConfig t;
    if (!g.stopwords.empty()) t.tokens = TokenFilterConfig::with_stopwords_file(g.stopwords);
    if (!g.abbreviations.empty()) t.segmenter = SegmenterConfig::with_abbreviations_file(g.abbreviations);
    return t;
}

Corpus require_corpus(const GlobalOptions& g) {
    if (g.corpus.empty()) throw ValidationError("--corpus is required");
    return load_corpus(g.corpus, text_config(g));
}

// Writes to --out when given, otherwise stdout.
void write_output(const GlobalOptions& g, const std::string& content) {
    if (g.out.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(g.out, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot write " + g.out);
    out << content;
    if (!out) throw ResourceError("failed writing " + g.out);
}

std::vector<double> read_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("cannot read " + path);
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            std::size_t used = 0;
            values.push_back(std::stod(line, &used));
            if (line.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(line);
        } catch (const std::logic_error&) {
            throw ValidationError(path + ":" + std::to_string(line_no) + ": not a number");
        }
    }
    return values;
}

SimilarityMethod method_from(const std::string& s) {
    auto m = parse_similarity_method(s);
    if (!m) throw ValidationError("unknown method '" + s + "'");
    return *m;
}

Ranker ranker_from(const std::string& s) {
    auto r = parse_ranker(s);
    if (!r) throw ValidationError("unknown ranker '" + s + "'");
    return *r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linguistic prominence of scientific papers in linked news articles"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--corpus", g.corpus, "JSONL corpus file");
    app.add_option("--seed", g.seed, "Seed for every random choice");
    app.add_option("--jobs", g.jobs, "Worker threads (never changes results)")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "Output file or directory");
    app.add_option("--stopwords", g.stopwords, "Override the shipped stopword list");
    app.add_option("--abbreviations", g.abbreviations, "Override the shipped abbreviation list");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Validate a corpus; with --out write it back canonically");
    std::string ingest_labels;
    ingest->add_option("--labels", ingest_labels, "CoreSC label JSONL");

    // extract-links
    auto* extract = app.add_subcommand("extract-links", "Emit news->paper DOI links as JSONL");
    std::string html_dir;
    extract->add_option("--html-dir", html_dir, "Directory of saved <doc id>.html pages");

    // rank
    auto* rank = app.add_subcommand("rank", "Rank news sentences by SemSimRank");
    std::string rank_method = "bow_jsd";
    RankConfig rank_config;
    std::string rank_doc;
    std::string rank_words;
    std::string rank_sentvec;
    rank->add_option("--method", rank_method, "bow_jsd | wordvec_cos | sentvec_cos")
        ->check(CLI::IsMember({"bow_jsd", "wordvec_cos", "sentvec_cos"}));
    rank->add_option("--damping", rank_config.damping);
    rank->add_option("--max-iter", rank_config.max_iterations);
    rank->add_option("--epsilon", rank_config.convergence_threshold);
    rank->add_option("--top-n", rank_config.top_n);
    rank->add_option("--doc", rank_doc, "Rank only this document");
    rank->add_option("--word-vectors", rank_words);
    rank->add_option("--sentence-embeddings", rank_sentvec);

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Run the F vs D prominence experiment");
    std::vector<std::string> exp_methods{"bow_jsd"};
    std::vector<std::string> exp_rankers{"semsimrank", "first_sentence", "random_sentence"};
    ExperimentConfig exp_config;
    std::string exp_labels, exp_words, exp_sentvec, exp_format = "all";
    experiment->add_option("--methods", exp_methods)->delimiter(',');
    experiment->add_option("--rankers", exp_rankers)->delimiter(',');
    experiment->add_option("--labels", exp_labels, "CoreSC label JSONL");
    experiment->add_option("--word-vectors", exp_words);
    experiment->add_option("--sentence-embeddings", exp_sentvec);
    experiment->add_option("--damping", exp_config.rank.damping);
    experiment->add_option("--max-iter", exp_config.rank.max_iterations);
    experiment->add_option("--epsilon", exp_config.rank.convergence_threshold);
    experiment->add_option("--top-n", exp_config.rank.top_n);
    experiment->add_option("--resamples", exp_config.bootstrap.resamples);
    experiment->add_option("--level", exp_config.bootstrap.level);
    experiment->add_option("--format", exp_format, "json | csv | tsv | all");

    // impact-stats
    auto* impact = app.add_subcommand("impact-stats", "Compare REF scores of news-linked vs other case studies");
    BootstrapConfig impact_boot;
    impact->add_option("--resamples", impact_boot.resamples);
    impact->add_option("--level", impact_boot.level);

    // report
    auto* report_cmd = app.add_subcommand("report", "Re-emit CSV/TSV/JSON from a saved report.json");
    std::string report_in, report_format = "all";
    report_cmd->add_option("--in", report_in, "report.json")->required();
    report_cmd->add_option("--format", report_format, "json | csv | tsv | all");

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "KS, normality and bootstrap on two value files");
    std::string stats_a, stats_b;
    BootstrapConfig stats_boot;
    stats_cmd->add_option("--a", stats_a, "First sample, one value per line")->required();
    stats_cmd->add_option("--b", stats_b, "Second sample, one value per line")->required();
    stats_cmd->add_option("--resamples", stats_boot.resamples);
    stats_cmd->add_option("--level", stats_boot.level);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*ingest) {
            Corpus corpus = require_corpus(g);
            if (!ingest_labels.empty()) corpus = load_coresc_labels(fs::path(ingest_labels), corpus);
            std::size_t news = 0, papers = 0, cases = 0, labeled = 0;
            for (const auto& d : corpus.documents()) {
                news += d.kind == DocumentKind::News;
                papers += d.kind == DocumentKind::Paper;
                cases += d.kind == DocumentKind::CaseStudy;
                labeled += d.coresc_labels.has_value();
            }
            const auto parts = partition_collections(corpus);
            json summary = {{"documents", corpus.documents().size()},
                            {"news", news},
                            {"papers", papers},
                            {"case_studies", cases},
                            {"labeled_papers", labeled},
                            {"links", corpus.links().size()},
                            {"uoa_results", corpus.uoa_results().size()},
                            {"pairs_F", parts.linked.pairs.size()},
                            {"pairs_D", parts.unlinked.pairs.size()}};
            if (!g.out.empty()) {
                std::ostringstream canonical;
                save_corpus(corpus, canonical);
                write_output(g, canonical.str());
                std::cerr << summary.dump() << '\n';
            } else {
                std::cout << summary.dump() << '\n';
            }
        } else if (*extract) {
            Corpus corpus = require_corpus(g);
            if (!html_dir.empty()) {
                auto docs = corpus.documents();
                for (auto& d : docs) {
                    if (d.kind != DocumentKind::Paper || d.doi) continue;
                    const fs::path page = fs::path(html_dir) / (d.id + ".html");
                    if (!fs::exists(page)) continue;
                    std::ifstream in(page, std::ios::binary);
                    if (!in) throw ResourceError("cannot read " + page.string());
                    std::ostringstream html;
                    html << in.rdbuf();
                    d.doi = extract_doi_from_html(html.str());
                }
                corpus = Corpus(std::move(docs), corpus.links(), corpus.uoa_results());
            }
            std::string out;
            for (const auto& link : link_documents(corpus)) out += link_to_jsonl(link) + "\n";
            write_output(g, out);
        } else if (*rank) {
            const Corpus corpus = require_corpus(g);
            const auto method = method_from(rank_method);
            rank_config.random_seed = g.seed;
            rank_config.validate();
            std::optional<WordVectorTable> words;
            std::optional<SentenceEmbeddingStore> sentvec;
            SimilarityContext context;
            if (!rank_words.empty()) {
                words = load_word_vectors(rank_words);
                context.word_vectors = &*words;
            }
            if (!rank_sentvec.empty()) {
                sentvec = load_sentence_embeddings(rank_sentvec);
                context.sentence_embeddings = &*sentvec;
            }
            context.require(method);
            std::vector<const Document*> targets;
            if (!rank_doc.empty()) {
                targets.push_back(&corpus.at(rank_doc));
            } else {
                for (const auto& d : corpus.documents()) {
                    if (d.kind == DocumentKind::News && !d.sentences.empty()) targets.push_back(&d);
                }
            }
            std::string out;
            for (const Document* d : targets) {
                const auto ranking = rank_sentences(*d, method, context, rank_config);
                json entries = json::array();
                for (std::size_t i = 0; i < std::min(rank_config.top_n, ranking.order.size()); ++i) {
                    entries.push_back({{"index", ranking.order[i].index}, {"score", ranking.order[i].score}});
                }
                out += json{{"doc_id", d->id},
                            {"ranking", std::move(entries)},
                            {"converged", ranking.rank.converged},
                            {"iterations", ranking.rank.iterations_used}}
                           .dump() +
                       "\n";
            }
            write_output(g, out);
        } else if (*experiment) {
            if (g.out.empty()) throw ValidationError("experiment needs --out <directory>");
            const auto format = parse_report_format(exp_format);
            const Corpus corpus = require_corpus(g);
            exp_config.methods.clear();
            for (const auto& m : exp_methods) exp_config.methods.push_back(method_from(m));
            exp_config.rankers.clear();
            for (const auto& r : exp_rankers) exp_config.rankers.push_back(ranker_from(r));
            exp_config.seed = g.seed;
            exp_config.jobs = g.jobs;
            if (!exp_labels.empty()) exp_config.coresc_labels_path = exp_labels;
            if (!exp_words.empty()) exp_config.word_vectors_path = exp_words;
            if (!exp_sentvec.empty()) exp_config.sentence_embeddings_path = exp_sentvec;
            const auto report = run_experiment(corpus, exp_config);
            for (const auto& p : emit_report(report, g.out, format)) std::cerr << "wrote " << p.string() << '\n';
        } else if (*impact) {
            const Corpus corpus = require_corpus(g);
            impact_boot.seed = g.seed;
            impact_boot.jobs = g.jobs;
            write_output(g, to_json(compare_impact_distributions(corpus, impact_boot)).dump(2) + "\n");
        } else if (*report_cmd) {
            if (g.out.empty()) throw ValidationError("report needs --out <directory>");
            const auto format = parse_report_format(report_format);
            std::ifstream in(report_in);
            if (!in) throw ResourceError("cannot read " + report_in);
            json j;
            try {
                j = json::parse(in);
            } catch (const json::exception& e) {
                throw ValidationError(report_in + ": " + e.what());
            }
            for (const auto& p : emit_report(report_from_json(j), g.out, format)) {
                std::cerr << "wrote " << p.string() << '\n';
            }
        } else if (*stats_cmd) {
            const SampleSet a{"a", read_values(stats_a)};
            const SampleSet b{"b", read_values(stats_b)};
            stats_boot.seed = g.seed;
            stats_boot.jobs = g.jobs;
            json out;
            out["ks"] = to_json(ks2_test(a, b));
            for (const auto* s : {&a, &b}) {
                const std::string key = "normality_" + s->label;
                out[key] = s->values.size() >= kNormalityMinSamples ? to_json(dagostino_pearson(*s)) : json(nullptr);
            }
            out["bootstrap"] = to_json(bootstrap_mean_diff(a, b, stats_boot));
            write_output(g, out.dump(2) + "\n");
        }
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitResource;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return 0;
}
