#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "relstance/rng.hpp"
#include "relstance/textfeat.hpp"

using namespace relstance;

TEST_CASE("tokenize lowercases and strips punctuation") {
    CHECK(tokenize("Viva la RT!") ==
          std::vector<std::string>{"viva", "la", "rt"});
}

TEST_CASE("tokenize keeps mention/hashtag prefixes and collapses urls") {
    CHECK(tokenize("@user https://x.io #SiAlVax") ==
          std::vector<std::string>{"@user", "<url>", "#sialvax"});
    CHECK(tokenize("see http://a.b/c?q=1, now") ==
          std::vector<std::string>{"see", "<url>", "now"});
}

TEST_CASE("tokenize of empty text is empty") {
    CHECK(tokenize("").empty());
    CHECK(tokenize("  \t \n ").empty());
}

TEST_CASE("tokenize splits on unicode whitespace") {
    // U+00A0 no-break space and U+2003 em space
    CHECK(tokenize("a\xc2\xa0m\xe2\x80\x83z") ==
          std::vector<std::string>{"a", "m", "z"});
}

TEST_CASE("fit_tfidf reproduces the smoothed idf formula") {
    TfIdfModel m = TfIdfModel::fit({{"a", "b"}, {"a", "c"}});
    CHECK(m.idf_of("a") == Catch::Approx(1.0).epsilon(1e-12)); // ln(3/3)+1
    CHECK(m.idf_of("b") == Catch::Approx(std::log(1.5) + 1.0).epsilon(1e-12));
    CHECK(m.idf_of("c") == Catch::Approx(std::log(1.5) + 1.0).epsilon(1e-12));
}

TEST_CASE("a token present in every document has the minimum idf") {
    TfIdfModel m = TfIdfModel::fit({{"x", "a"}, {"x", "b"}, {"x", "c"}});
    CHECK(m.idf_of("x") < m.idf_of("a"));
    CHECK(m.idf_of("x") < m.idf_of("b"));
}

TEST_CASE("max_features keeps the most frequent tokens") {
    TfIdfModel m = TfIdfModel::fit({{"a", "b"}, {"a", "c"}}, 1);
    CHECK(m.vocab_size() == 1);
    CHECK(m.has_token("a"));
    CHECK_FALSE(m.has_token("b"));
}

TEST_CASE("fit_tfidf rejects an empty corpus") {
    CHECK_THROWS(TfIdfModel::fit({}));
}

TEST_CASE("transform_tfidf matches the hand-computed example") {
    TfIdfModel m = TfIdfModel::fit({{"a", "b"}, {"a", "c"}});
    SparseVector v = m.transform({"a", "b"});
    REQUIRE(v.entries.size() == 2);
    // unnormalized (1.0, 1.4055); norm 1.7251
    double idf_b = std::log(1.5) + 1.0;
    double norm = std::sqrt(1.0 + idf_b * idf_b);
    CHECK(v.entries[0].second == Catch::Approx(1.0 / norm).epsilon(1e-4));
    CHECK(v.entries[1].second == Catch::Approx(idf_b / norm).epsilon(1e-4));
    CHECK(v.entries[0].second == Catch::Approx(0.5797).margin(1e-4));
    CHECK(v.entries[1].second == Catch::Approx(0.8148).margin(1e-4));
}

TEST_CASE("transform_tfidf of an all-unknown document is the zero vector") {
    TfIdfModel m = TfIdfModel::fit({{"a", "b"}, {"a", "c"}});
    SparseVector v = m.transform({"zz", "qq"});
    CHECK(v.entries.empty());
    CHECK(v.dim == m.vocab_size());
}

TEST_CASE("transform_tfidf output has unit norm unless zero") {
    Rng rng(42);
    std::vector<std::vector<std::string>> corpus;
    std::vector<std::string> pool = {"a", "b", "c", "d", "e", "f", "g"};
    for (int d = 0; d < 30; ++d) {
        std::vector<std::string> doc;
        for (int t = 0; t < 1 + static_cast<int>(rng.uniform_index(6)); ++t)
            doc.push_back(pool[rng.uniform_index(pool.size())]);
        corpus.push_back(doc);
    }
    TfIdfModel m = TfIdfModel::fit(corpus);
    for (const auto& doc : corpus) {
        SparseVector v = m.transform(doc);
        if (!v.entries.empty())
            CHECK(v.l2_norm() == Catch::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("transform never mutates the model") {
    TfIdfModel m = TfIdfModel::fit({{"a", "b"}});
    auto j1 = m.to_json();
    (void)m.transform({"a", "zz"});
    CHECK(m.to_json() == j1);
}

TEST_CASE("idf is non-increasing in document frequency") {
    // df: a=4, b=2, c=1
    TfIdfModel m =
        TfIdfModel::fit({{"a", "b"}, {"a", "b"}, {"a", "c"}, {"a"}});
    CHECK(m.idf_of("a") <= m.idf_of("b"));
    CHECK(m.idf_of("b") <= m.idf_of("c"));
}

TEST_CASE("tfidf model json round-trips") {
    TfIdfModel m = TfIdfModel::fit({{"a", "b"}, {"a", "c"}});
    TfIdfModel back = TfIdfModel::from_json(m.to_json());
    CHECK(back.to_json() == m.to_json());
    nlohmann::json no_version = m.to_json();
    no_version.erase("version");
    CHECK_THROWS(TfIdfModel::from_json(no_version));
}

TEST_CASE("avg_word_vectors averages known tokens") {
    WordVectorTable t(2);
    t.put("cat", {1, 0});
    t.put("dog", {0, 1});

    auto r = avg_word_vectors({"cat", "dog"}, t);
    CHECK(r.mean == std::vector<double>{0.5, 0.5});
    CHECK(r.hits == 2);

    auto oov = avg_word_vectors({"cat", "unicorn"}, t);
    CHECK(oov.mean == std::vector<double>{1, 0});
    CHECK(oov.hits == 1);

    auto none = avg_word_vectors({}, t);
    CHECK(none.mean == std::vector<double>{0, 0});
    CHECK(none.hits == 0);
}

TEST_CASE("avg_word_vectors is permutation invariant") {
    WordVectorTable t(3);
    t.put("a", {1, 2, 3});
    t.put("b", {-1, 0, 1});
    t.put("c", {0.5, 0.5, 0.5});
    std::vector<std::string> doc = {"a", "b", "c", "b"};
    auto r1 = avg_word_vectors(doc, t);
    std::vector<std::string> shuffled = {"b", "c", "b", "a"};
    auto r2 = avg_word_vectors(shuffled, t);
    for (int j = 0; j < 3; ++j)
        CHECK(r1.mean[j] == Catch::Approx(r2.mean[j]).epsilon(1e-12));
}
