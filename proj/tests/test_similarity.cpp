#include "prominence/error.hpp"
#include "prominence/random.hpp"
#include "prominence/similarity.hpp"
#include "test_support.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

using namespace prominence;
using testing::fixture;
using testing::make_doc;

namespace {

// Reference values from scipy.spatial.distance.jensenshannon(p, q, base=2).
constexpr double kJsOneHotVsUniform = 0.5579230452841438;
constexpr double kBowTwoThirdsOneThird = 1.0 - 0.2858394058654448;

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const auto dir = std::filesystem::temp_directory_path() / "prominence_similarity_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream(path) << content;
    return path;
}

const Corpus& articles() {
    static const Corpus c = load_corpus(fixture("articles.jsonl"));
    return c;
}

}  // namespace

TEST_CASE("js_distance examples") {
    const std::vector<double> half{0.5, 0.5};
    CHECK(js_distance(half, half) == 0.0);
    CHECK(js_distance(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 1.0);
    CHECK(js_distance(std::vector<double>{1, 0}, half) == Catch::Approx(kJsOneHotVsUniform).margin(1e-12));
}

TEST_CASE("js_distance input validation") {
    CHECK_THROWS_AS(js_distance(std::vector<double>{1.0}, std::vector<double>{0.5, 0.5}), ValidationError);
    CHECK_THROWS_AS(js_distance(std::vector<double>{0.6, 0.6}, std::vector<double>{0.5, 0.5}), ValidationError);
    CHECK_THROWS_AS(js_distance(std::vector<double>{-0.5, 1.5}, std::vector<double>{0.5, 0.5}), ValidationError);
    CHECK_THROWS_AS(js_distance(std::vector<double>{}, std::vector<double>{}), ValidationError);
}

TEST_CASE("js_distance is exactly 1 for disjoint supports") {
    CHECK(js_distance(std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3, 0, 0},
                      std::vector<double>{0, 0, 0, 0.5, 0.5}) == 1.0);
}

TEST_CASE("js_distance is a metric on random triples") {
    Rng rng(1);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng.below(12);
        const auto p = testing::random_distribution(rng, n);
        const auto q = testing::random_distribution(rng, n);
        const auto r = testing::random_distribution(rng, n);
        const double pq = js_distance(p, q);
        REQUIRE(pq == js_distance(q, p));
        REQUIRE(pq >= 0.0);
        REQUIRE(pq <= 1.0);
        REQUIRE(js_distance(p, p) <= 1e-12);
        REQUIRE(pq <= js_distance(p, r) + js_distance(r, q) + 1e-9);
    }
}

TEST_CASE("bow_similarity examples") {
    CHECK(bow_similarity({"cat", "dog"}, {"cat", "dog"}) == 1.0);
    CHECK(bow_similarity({"cat", "dog"}, {"dog", "cat"}) == 1.0);
    CHECK(bow_similarity({"cat"}, {"dog"}) == 0.0);
    CHECK(bow_similarity({"cat", "cat", "dog"}, {"cat", "dog", "dog"}) ==
          Catch::Approx(kBowTwoThirdsOneThird).margin(1e-12));
    CHECK(bow_similarity({}, {"cat"}) == 0.0);
    CHECK(bow_similarity({"cat"}, {}) == 0.0);
    CHECK(bow_similarity(std::vector<std::string>{}, std::vector<std::string>{}) == 0.0);
}

TEST_CASE("bow_similarity properties on random token lists") {
    Rng rng(2);
    const std::vector<std::string> words{"salt", "blood", "pressure", "risk", "heart", "diet", "cut"};
    auto random_tokens = [&] {
        std::vector<std::string> t;
        for (std::uint64_t i = 0, n = 1 + rng.below(10); i < n; ++i) t.push_back(words[rng.below(words.size())]);
        return t;
    };
    for (int trial = 0; trial < 2000; ++trial) {
        const auto a = random_tokens();
        const auto b = random_tokens();
        const double s = bow_similarity(a, b);
        REQUIRE(s >= 0.0);
        REQUIRE(s <= 1.0);
        REQUIRE(s == bow_similarity(b, a));
        auto shuffled = a;
        for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
        REQUIRE(bow_similarity(shuffled, b) == s);
        // Equal to 1 exactly when the normalized count distributions agree: doubling every token keeps them equal.
        auto doubled = a;
        doubled.insert(doubled.end(), a.begin(), a.end());
        REQUIRE(bow_similarity(a, doubled) == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("cosine examples") {
    const std::vector<double> u{1.0, 2.0, 3.0};
    CHECK(cosine(u, u) == Catch::Approx(1.0).margin(1e-15));
    CHECK(cosine(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
    CHECK(cosine(std::vector<double>{1, 0}, std::vector<double>{1, 1}) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-15));
    CHECK(cosine(std::vector<double>{0, 0}, std::vector<double>{1, 1}) == 0.0);
    CHECK(cosine(std::vector<double>{1, 0}, std::vector<double>{-1, 0}) == -1.0);
    CHECK_THROWS_AS(cosine(std::vector<double>{1}, std::vector<double>{1, 0}), ValidationError);
    CHECK(clamp_similarity(-0.3) == 0.0);
    CHECK(clamp_similarity(0.3) == 0.3);
}

TEST_CASE("mean_word_vector examples") {
    WordVectorTable table;
    table.add("cat", {1.0, 0.0});
    table.add("dog", {0.0, 1.0});
    CHECK(mean_word_vector({"cat"}, table) == std::vector<double>{1.0, 0.0});
    CHECK(mean_word_vector({"cat", "dog"}, table) == std::vector<double>{0.5, 0.5});
    CHECK(mean_word_vector({"cat", "zebra"}, table) == std::vector<double>{1.0, 0.0});
    CHECK(mean_word_vector({"zebra"}, table) == std::vector<double>{0.0, 0.0});
    CHECK(mean_word_vector({}, table) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("mean_word_vector is invariant under token order") {
    Rng rng(3);
    WordVectorTable table;
    const std::vector<std::string> words{"a1", "b2", "c3", "d4", "e5"};
    for (const auto& w : words) table.add(w, testing::draw_normal(rng, 8, 0.0, 1.0));
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<std::string> tokens;
        for (std::uint64_t i = 0, n = rng.below(12); i < n; ++i) tokens.push_back(words[rng.below(words.size())]);
        auto shuffled = tokens;
        for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
        const auto m1 = mean_word_vector(tokens, table);
        const auto m2 = mean_word_vector(shuffled, table);
        for (std::size_t k = 0; k < m1.size(); ++k) REQUIRE(m1[k] == Catch::Approx(m2[k]).margin(1e-12));
    }
}

TEST_CASE("WordVectorTable validation") {
    WordVectorTable table;
    CHECK_FALSE(table.dimension().has_value());
    CHECK_THROWS_AS(mean_word_vector({"x"}, table), ResourceError);
    table.add("Cat", {1.0, 2.0});
    CHECK(table.dimension() == 2u);
    CHECK(table.find("cat") != nullptr);
    CHECK_THROWS_AS(table.add("dog", {1.0}), ValidationError);
    CHECK_THROWS_AS(table.add("cat", {1.0, 2.0}), ValidationError);
    CHECK_THROWS_AS(table.add("eel", {1.0, std::nan("")}), ValidationError);
}

TEST_CASE("load_word_vectors") {
    const auto table = load_word_vectors(write_temp("two.txt", "cat 1 0 0\ndog 0 1 0.5\n"));
    CHECK(table.size() == 2);
    CHECK(table.dimension() == 3u);
    CHECK(*table.find("dog") == std::vector<double>{0.0, 1.0, 0.5});

    CHECK_THROWS_AS(load_word_vectors(write_temp("ragged.txt", "cat 1 0 0\ndog 0 1 0 1\n")), ValidationError);

    const auto empty = load_word_vectors(write_temp("empty.txt", ""));
    CHECK(empty.size() == 0);
    CHECK_FALSE(empty.dimension().has_value());
    CHECK_THROWS_AS(mean_word_vector({"cat"}, empty), ResourceError);

    CHECK_THROWS_AS(load_word_vectors(write_temp("bad.txt", "cat 1 zero\n")), ValidationError);
    CHECK_THROWS_AS(load_word_vectors("/nonexistent/vectors.txt"), ResourceError);
}

TEST_CASE("load_sentence_embeddings") {
    const auto store = load_sentence_embeddings(write_temp(
        "emb.jsonl", R"({"doc_id":"d","sentence_index":0,"vector":[1,0]})"
                     "\n"
                     R"({"doc_id":"d","sentence_index":1,"vector":[0,1]})"
                     "\n"));
    CHECK(store.size() == 2);
    CHECK(store.dimension() == 2u);
    CHECK(store.find("d", 1) != nullptr);
    CHECK(store.find("d", 2) == nullptr);
    CHECK_THROWS_AS(load_sentence_embeddings(write_temp(
                        "emb_ragged.jsonl", R"({"doc_id":"d","sentence_index":0,"vector":[1,0]})"
                                            "\n"
                                            R"({"doc_id":"d","sentence_index":1,"vector":[0,1,2]})"
                                            "\n")),
                    ValidationError);
    CHECK_THROWS_AS(load_sentence_embeddings(write_temp(
                        "emb_dup.jsonl", R"({"doc_id":"d","sentence_index":0,"vector":[1,0]})"
                                         "\n"
                                         R"({"doc_id":"d","sentence_index":0,"vector":[0,1]})"
                                         "\n")),
                    ValidationError);

    const Corpus corpus({make_doc("d", DocumentKind::News, {"One here.", "Two here."})}, {}, {});
    CHECK_NOTHROW(store.check_against(corpus));
    SentenceEmbeddingStore stray;
    stray.add("d", 7, {1.0, 0.0});
    CHECK_THROWS_AS(stray.check_against(corpus), ValidationError);
}

TEST_CASE("pair_similarity: identical sentence gives 1") {
    const auto d = make_doc("d", DocumentKind::News, {"Salt raises blood pressure.", "Cats sleep."});
    WordVectorTable words;
    words.add("salt", {1.0, 0.2});
    words.add("blood", {0.3, 1.0});
    SentenceEmbeddingStore sents;
    sents.add("d", 0, {0.4, 0.9});
    sents.add("d", 1, {0.0, 1.0});
    const SimilarityContext ctx{&words, &sents};
    for (auto m : {SimilarityMethod::BowJsd, SimilarityMethod::WordvecCos, SimilarityMethod::SentvecCos}) {
        CHECK(pair_similarity(m, ctx, {&d, 0}, {&d, 0}) == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("pair_similarity: missing sentence vector names the key") {
    const auto d = make_doc("doc7", DocumentKind::News, {"Salt raises blood pressure.", "Cats sleep."});
    SentenceEmbeddingStore sents;
    sents.add("doc7", 0, {0.4, 0.9});
    const SimilarityContext ctx{nullptr, &sents};
    try {
        pair_similarity(SimilarityMethod::SentvecCos, ctx, {&d, 0}, {&d, 1});
        FAIL("expected MissingVectorError");
    } catch (const MissingVectorError& e) {
        CHECK(e.doc_id() == "doc7");
        CHECK(e.index() == 1);
    }
}

TEST_CASE("pair_similarity: missing resources") {
    const auto d = make_doc("d", DocumentKind::News, {"Salt raises blood pressure."});
    const SimilarityContext none{};
    CHECK_THROWS_AS(pair_similarity(SimilarityMethod::WordvecCos, none, {&d, 0}, {&d, 0}), ResourceError);
    CHECK_THROWS_AS(pair_similarity(SimilarityMethod::SentvecCos, none, {&d, 0}, {&d, 0}), ResourceError);
    CHECK_NOTHROW(pair_similarity(SimilarityMethod::BowJsd, none, {&d, 0}, {&d, 0}));
}

TEST_CASE("pair_similarity on the cannabis article") {
    // Frozen from tests/oracles/bow_oracle.py.
    const auto& cannabis = articles().at("cannabis");
    const auto& finance = articles().at("finance");
    const SimilarityContext ctx{};
    const double topical = pair_similarity(SimilarityMethod::BowJsd, ctx, {&cannabis, 2}, {&cannabis, 4});
    const double unrelated = pair_similarity(SimilarityMethod::BowJsd, ctx, {&cannabis, 2}, {&finance, 0});
    CHECK(topical > 0.0);
    CHECK(topical < 1.0);
    CHECK(topical == Catch::Approx(0.16877099011601315).margin(1e-12));
    CHECK(unrelated == 0.0);
    CHECK(topical > unrelated);
}

TEST_CASE("pair_similarity is symmetric and bounded for every method") {
    const auto corpus = load_corpus(fixture("synthetic_corpus.jsonl"));
    const auto words = load_word_vectors(fixture("synthetic_word_vectors.txt"));
    const auto sents = load_sentence_embeddings(fixture("synthetic_sentence_embeddings.jsonl"));
    const SimilarityContext ctx{&words, &sents};
    std::vector<SentenceRef> refs;
    for (const auto& d : corpus.documents()) {
        if (d.kind == DocumentKind::CaseStudy) continue;
        for (std::size_t i = 0; i < d.sentences.size(); ++i) refs.push_back({&d, i});
    }
    Rng rng(4);
    for (auto m : {SimilarityMethod::BowJsd, SimilarityMethod::WordvecCos, SimilarityMethod::SentvecCos}) {
        const SentenceEncoder encoder(m, ctx);
        for (int trial = 0; trial < 2000; ++trial) {
            const auto a = refs[rng.below(refs.size())];
            const auto b = refs[rng.below(refs.size())];
            const double ab = pair_similarity(m, ctx, a, b);
            REQUIRE(ab == pair_similarity(m, ctx, b, a));
            REQUIRE(ab >= 0.0);
            REQUIRE(ab <= 1.0);
            REQUIRE(encoder.similarity(encoder.encode(a), encoder.encode(b)) == ab);
        }
    }
}

TEST_CASE("similarity method names") {
    for (auto m : {SimilarityMethod::BowJsd, SimilarityMethod::WordvecCos, SimilarityMethod::SentvecCos}) {
        CHECK(parse_similarity_method(to_string(m)) == m);
    }
    CHECK(to_string(SimilarityMethod::BowJsd) == "bow_jsd");
    CHECK_FALSE(parse_similarity_method("tfidf").has_value());
}
