#include "prominence/error.hpp"
#include "prominence/random.hpp"
#include "prominence/semsimrank.hpp"
#include "test_support.hpp"

#include <Eigen/Dense>
#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace prominence;
using testing::fixture;
using testing::make_doc;
using testing::token_doc;

namespace {

const Corpus& articles() {
    static const Corpus c = load_corpus(fixture("articles.jsonl"));
    return c;
}

/// Dense power iteration on the transposed matrix, run to 1e-12 in L1.
Eigen::VectorXd power_oracle(const Eigen::MatrixXd& stochastic, double damping) {
    const auto n = stochastic.rows();
    Eigen::VectorXd p = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    const Eigen::VectorXd teleport = Eigen::VectorXd::Constant(n, (1.0 - damping) / static_cast<double>(n));
    for (int it = 0; it < 100000; ++it) {
        const Eigen::VectorXd next = teleport + damping * stochastic.transpose() * p;
        const double change = (next - p).lpNorm<1>();
        p = next;
        if (change < 1e-12) break;
    }
    return p / p.sum();
}

/// Fixed point solved directly: (I - d M^T) p = (1 - d) / S.
Eigen::VectorXd linear_oracle(const Eigen::MatrixXd& stochastic, double damping) {
    const auto n = stochastic.rows();
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - damping * stochastic.transpose();
    const Eigen::VectorXd b = Eigen::VectorXd::Constant(n, (1.0 - damping) / static_cast<double>(n));
    const Eigen::VectorXd p = a.partialPivLu().solve(b);
    return p / p.sum();
}

SimilarityMatrix random_weights(Rng& rng, std::size_t n) {
    SimilarityMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double w = rng.uniform01() < 0.3 ? 0.0 : rng.uniform01();
            m(i, j) = w;
            m(j, i) = w;
        }
    }
    return m;
}

Eigen::MatrixXd to_eigen(const SimilarityMatrix& m) {
    Eigen::MatrixXd e(m.size(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) e(i, j) = m(i, j);
    }
    return e;
}

std::size_t top_index(const Document& doc) {
    return rank_sentences(doc, SimilarityMethod::BowJsd, {}, {}).order.front().index;
}

}  // namespace

TEST_CASE("build_graph examples") {
    SECTION("single sentence gives a 1x1 zero matrix") {
        const auto g = build_graph(make_doc("d", DocumentKind::News, {"Salt matters."}), SimilarityMethod::BowJsd, {});
        REQUIRE(g.size() == 1);
        CHECK(g(0, 0) == 0.0);
    }
    SECTION("two identical sentences") {
        const auto g = build_graph(make_doc("d", DocumentKind::News, {"Salt raises risk.", "Salt raises risk."}),
                                   SimilarityMethod::BowJsd, {});
        CHECK(g(0, 1) == 1.0);
        CHECK(g(1, 0) == 1.0);
        CHECK(g(0, 0) == 0.0);
        CHECK(g(1, 1) == 0.0);
    }
    SECTION("outlier sentence") {
        // Frozen from tests/oracles/bow_oracle.py.
        const auto g = build_graph(make_doc("d", DocumentKind::News,
                                            {"Cannabis users report dependence.", "Cannabis dependence affects users.",
                                             "Bakery prices rose sharply."}),
                                   SimilarityMethod::BowJsd, {});
        CHECK(g(0, 1) == Catch::Approx(0.5).margin(1e-12));
        CHECK(g(0, 2) == 0.0);
        CHECK(g(1, 2) == 0.0);
        CHECK(g(2, 0) < g(0, 1));
        CHECK(g(2, 1) < g(0, 1));
    }
    SECTION("empty document") {
        Document empty;
        empty.id = "empty";
        CHECK_THROWS_AS(build_graph(empty, SimilarityMethod::BowJsd, {}), ValidationError);
    }
}

TEST_CASE("build_graph is symmetric with a zero diagonal") {
    const auto& doc = articles().at("cannabis");
    const auto g = build_graph(doc, SimilarityMethod::BowJsd, {});
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(g(i, i) == 0.0);
        for (std::size_t j = 0; j < g.size(); ++j) CHECK(g(i, j) == g(j, i));
    }
}

TEST_CASE("row_normalize examples") {
    SECTION("row with the diagonal in the middle") {
        SimilarityMatrix m(3);
        m(1, 0) = 0.2;
        m(1, 2) = 0.6;
        m(0, 1) = 1.0;
        m(2, 1) = 1.0;
        const auto n = row_normalize(m);
        CHECK(n.normalized());
        CHECK(n(1, 0) == Catch::Approx(0.25).margin(1e-15));
        CHECK(n(1, 1) == 0.0);
        CHECK(n(1, 2) == Catch::Approx(0.75).margin(1e-15));
    }
    SECTION("all-zero row becomes uniform over the others") {
        const auto n = row_normalize(SimilarityMatrix(3));
        CHECK(n(0, 0) == 0.0);
        CHECK(n(0, 1) == 0.5);
        CHECK(n(0, 2) == 0.5);
    }
    SECTION("1x1") {
        const auto n = row_normalize(SimilarityMatrix(1));
        CHECK(n.normalized());
        CHECK(n(0, 0) == 0.0);
        CHECK(pagerank(n, {}).scores == std::vector<double>{1.0});
    }
}

TEST_CASE("pagerank examples") {
    SECTION("uniform graph is exactly uniform after one iteration") {
        SimilarityMatrix m(4);
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) m(i, j) = i == j ? 0.0 : 0.7;
        }
        const auto r = pagerank(row_normalize(m), {});
        CHECK(r.scores == std::vector<double>(4, 0.25));
        CHECK(r.converged);
        CHECK(r.iterations_used == 1);
    }
    SECTION("S = 1") {
        const auto r = pagerank(row_normalize(SimilarityMatrix(1)), {});
        CHECK(r.scores == std::vector<double>{1.0});
        CHECK(r.converged);
    }
    SECTION("tight triple and an outlier") {
        SimilarityMatrix m(4, {0, 0.9, 0.8, 0.1, 0.9, 0, 0.85, 0.05, 0.8, 0.85, 0, 0.1, 0.1, 0.05, 0.1, 0});
        const auto r = pagerank(row_normalize(m), {});
        // Frozen from tests/oracles/bow_oracle.py.
        const std::vector<double> expected{0.3123390098046605, 0.30866320576237477, 0.30466266040776196,
                                           0.07433512402520284};
        for (std::size_t i = 0; i < 4; ++i) CHECK(r.scores[i] == Catch::Approx(expected[i]).margin(1e-6));
        CHECK(r.scores[0] > r.scores[3]);
        CHECK(r.scores[1] > r.scores[3]);
        CHECK(r.scores[2] > r.scores[3]);
    }
    SECTION("requires a normalized matrix") {
        CHECK_THROWS_AS(pagerank(SimilarityMatrix(3), {}), ValidationError);
    }
    SECTION("max_iterations caps the loop and leaves converged false") {
        Rng rng(5);
        RankConfig cfg;
        cfg.max_iterations = 1;
        cfg.convergence_threshold = 1e-300;
        const auto r = pagerank(row_normalize(random_weights(rng, 6)), cfg);
        CHECK(r.iterations_used == 1);
        CHECK_FALSE(r.converged);
        CHECK(std::accumulate(r.scores.begin(), r.scores.end(), 0.0) == Catch::Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("RankConfig validation") {
    RankConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    for (double d : {0.0, 1.0, -0.1, 1.5, std::nan("")}) {
        cfg = {};
        cfg.damping = d;
        CHECK_THROWS_AS(cfg.validate(), ValidationError);
    }
    cfg = {};
    cfg.max_iterations = 0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = {};
    cfg.convergence_threshold = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = {};
    cfg.top_n = 0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("pagerank matches dense oracles on random matrices") {
    Rng rng(2018);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng.below(19);
        const auto norm = row_normalize(random_weights(rng, n));
        const auto r = pagerank(norm, {});
        const auto e = to_eigen(norm);
        const auto by_power = power_oracle(e, 0.85);
        const auto by_solve = linear_oracle(e, 0.85);
        REQUIRE(r.converged);
        double linf = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            linf = std::max(linf, std::abs(r.scores[i] - by_power(static_cast<Eigen::Index>(i))));
        }
        REQUIRE(linf < 1e-6);
        REQUIRE((by_power - by_solve).lpNorm<Eigen::Infinity>() < 1e-10);
    }
}

TEST_CASE("rank vector invariants on random graphs") {
    Rng rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng.below(15);
        const auto raw = random_weights(rng, n);
        RankConfig cfg;
        cfg.damping = 0.5 + 0.45 * rng.uniform01();
        cfg.max_iterations = 1 + rng.below(100);
        const auto r = pagerank(row_normalize(raw), cfg);
        REQUIRE(std::accumulate(r.scores.begin(), r.scores.end(), 0.0) == Catch::Approx(1.0).margin(1e-9));
        const double floor = (1.0 - cfg.damping) / static_cast<double>(n);
        for (double s : r.scores) REQUIRE(s >= floor - 1e-15);

        // Scaling every raw weight leaves the ordering unchanged.
        SimilarityMatrix scaled(n);
        const double k = 0.01 + 100.0 * rng.uniform01();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) scaled(i, j) = raw(i, j) * k;
        }
        const auto rs = pagerank(row_normalize(scaled), cfg);
        const auto a = order_by_score(r.scores);
        const auto b = order_by_score(rs.scores);
        for (std::size_t i = 0; i < n; ++i) {
            // Identical orderings unless two scores are within rounding of each other.
            if (a[i].index != b[i].index) {
                REQUIRE(std::abs(r.scores[a[i].index] - r.scores[b[i].index]) < 1e-12);
            }
        }

        // Same input, same bits.
        const auto again = pagerank(row_normalize(raw), cfg);
        REQUIRE(again.scores == r.scores);
        REQUIRE(again.iterations_used == r.iterations_used);
    }
}

TEST_CASE("order_by_score breaks ties by index") {
    const auto o = order_by_score({0.2, 0.4, 0.2, 0.4});
    REQUIRE(o.size() == 4);
    CHECK(o[0].index == 1);
    CHECK(o[1].index == 3);
    CHECK(o[2].index == 0);
    CHECK(o[3].index == 2);
}

TEST_CASE("rank_sentences: all sentences identical keeps index order") {
    const auto doc = make_doc("d", DocumentKind::News, {"Salt risk.", "Salt risk.", "Salt risk.", "Salt risk."});
    const auto r = rank_sentences(doc, SimilarityMethod::BowJsd, {}, {});
    for (std::size_t i = 0; i < 4; ++i) CHECK(r.order[i].index == i);
}

TEST_CASE("rank_sentences: topical cluster ranks first") {
    const auto& doc = articles().at("cluster6");
    const auto r = rank_sentences(doc, SimilarityMethod::BowJsd, {}, {});
    // Frozen from tests/oracles/bow_oracle.py.
    const std::vector<double> expected{0.037878787879, 0.316809481467, 0.037878787879,
                                       0.237760509280, 0.037878787879, 0.331793645617};
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK(r.rank.scores[i] == Catch::Approx(expected[i]).margin(1e-6));
    CHECK(r.order.front().index == 5);
    const std::vector<std::size_t> cluster{1, 3, 5};
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(std::find(cluster.begin(), cluster.end(), r.order[k].index) != cluster.end());
    }
}

TEST_CASE("SemSimRank picks differ from the first sentence on the news fixtures") {
    // News fixtures whose most repeated content sits at index 1 or 2.
    CHECK(top_index(articles().at("cannabis")) == 2);
    CHECK(top_index(articles().at("salt")) == 1);
    CHECK(top_index(articles().at("pterosaur")) == 1);
    for (const char* id : {"cannabis", "salt", "pterosaur", "pubquiz", "antidepressants", "bmj"}) {
        INFO(id);
        CHECK(top_index(articles().at(id)) != first_sentence_baseline(articles().at(id)));
    }
}

TEST_CASE("select_top_n") {
    const std::vector<RankedSentence> ranked{{3, 0.4}, {0, 0.35}, {1, 0.25}};
    CHECK(select_top_n(ranked, 1) == std::vector<std::size_t>{3});
    CHECK(select_top_n(ranked, 2) == std::vector<std::size_t>{3, 0});
    CHECK(select_top_n(ranked, 10) == std::vector<std::size_t>{3, 0, 1});
}

TEST_CASE("first_sentence_baseline") {
    const auto& bmj = articles().at("bmj");
    CHECK(first_sentence_baseline(bmj) == 0);
    CHECK(bmj.sentences[first_sentence_baseline(bmj)].text ==
          "One in three adults aged over 65 in England have difficulty understanding basic health-related "
          "information, suggests a study in the BMJ.");
    Document empty;
    empty.id = "empty";
    CHECK_THROWS_AS(first_sentence_baseline(empty), ValidationError);
}

TEST_CASE("random_sentence_baseline") {
    CHECK(random_sentence_baseline(make_doc("one", DocumentKind::News, {"Only one."}), 99) == 0);
    const auto doc = make_doc("five", DocumentKind::News, {"A one.", "B two.", "C three.", "D four.", "E five."});
    CHECK(random_sentence_baseline(doc, 5) == random_sentence_baseline(doc, 5));

    std::vector<int> counts(5, 0);
    for (std::uint64_t seed = 0; seed < 10000; ++seed) ++counts[random_sentence_baseline(doc, seed)];
    const double sigma = std::sqrt(10000 * 0.2 * 0.8);
    for (int c : counts) CHECK(std::abs(c - 2000) <= 3 * sigma);

    Document empty;
    empty.id = "empty";
    CHECK_THROWS_AS(random_sentence_baseline(empty, 1), ValidationError);
}

TEST_CASE("prominent_sentences") {
    const auto& doc = articles().at("cluster6");
    RankConfig cfg;
    cfg.top_n = 3;
    const auto sem = prominent_sentences(Ranker::SemSimRank, doc, SimilarityMethod::BowJsd, {}, cfg);
    CHECK(sem == std::vector<std::size_t>{5, 1, 3});
    CHECK(prominent_sentences(Ranker::FirstSentence, doc, SimilarityMethod::BowJsd, {}, cfg) ==
          std::vector<std::size_t>{0});
    const auto rnd = prominent_sentences(Ranker::RandomSentence, doc, SimilarityMethod::BowJsd, {}, cfg);
    REQUIRE(rnd.size() == 1);
    CHECK(rnd[0] == random_sentence_baseline(doc, cfg.random_seed));
    for (auto r : {Ranker::SemSimRank, Ranker::FirstSentence, Ranker::RandomSentence}) {
        CHECK(parse_ranker(to_string(r)) == r);
    }
    CHECK_FALSE(parse_ranker("lexrank").has_value());
}
