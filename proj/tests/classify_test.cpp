#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "relstance/classify.hpp"
#include "relstance/rng.hpp"

using namespace relstance;

namespace {

RelationalEmbedding make_embedding(
    std::initializer_list<std::pair<const char*, std::vector<double>>> rows) {
    std::vector<std::string> users;
    std::vector<double> data;
    int dim = 0;
    for (const auto& [u, v] : rows) {
        users.push_back(u);
        dim = static_cast<int>(v.size());
        data.insert(data.end(), v.begin(), v.end());
    }
    return RelationalEmbedding(users, data, dim);
}

TweetDataset tweets_of(
    std::initializer_list<std::tuple<const char*, const char*, Stance, Split>> ts) {
    TweetDataset ds;
    for (const auto& [id, author, stance, split] : ts)
        ds.add({id, author, "text", stance, split});
    return ds;
}

// independent oracle: plain double loop, cosine written out longhand
Stance brute_force_cdist(const std::array<std::vector<std::vector<double>>, 3>& banks,
                         const std::vector<double>& q, std::array<double, 3>& scores) {
    for (int c = 0; c < 3; ++c) {
        if (banks[c].empty()) {
            scores[c] = -std::numeric_limits<double>::infinity();
            continue;
        }
        double total = 0.0;
        for (const auto& u : banks[c]) {
            double dot = 0, nq = 0, nu = 0;
            for (std::size_t j = 0; j < q.size(); ++j) {
                dot += q[j] * u[j];
                nq += q[j] * q[j];
                nu += u[j] * u[j];
            }
            total += dot / (std::sqrt(nq) * std::sqrt(nu));
        }
        scores[c] = total / static_cast<double>(banks[c].size());
    }
    int best = 0;
    for (int c = 1; c < 3; ++c)
        if (scores[c] > scores[best]) best = c;
    return static_cast<Stance>(best);
}

} // namespace

TEST_CASE("cdist_fit stores one vector per TRAIN tweet with a known author") {
    auto emb = make_embedding(
        {{"u1", {1, 0}}, {"u2", {0, 1}}, {"u3", {1, 1}}});
    auto ds = tweets_of({{"t1", "u1", Stance::Favor, Split::Train},
                         {"t2", "u2", Stance::Against, Split::Train},
                         {"t3", "u3", Stance::None, Split::Train},
                         {"t4", "u1", Stance::Favor, Split::Test}});
    auto m = ClassDistanceModel::fit(ds, emb);
    CHECK(m.bank_size(Stance::Favor) == 1);
    CHECK(m.bank_size(Stance::Against) == 1);
    CHECK(m.bank_size(Stance::None) == 1);
}

TEST_CASE("cdist_fit skips tweets by unknown authors") {
    auto emb = make_embedding({{"u1", {1, 0}}});
    auto ds = tweets_of({{"t1", "u1", Stance::Favor, Split::Train},
                         {"t2", "ghost", Stance::Against, Split::Train}});
    auto m = ClassDistanceModel::fit(ds, emb);
    CHECK(m.bank_size(Stance::Favor) == 1);
    CHECK(m.bank_size(Stance::Against) == 0);
}

TEST_CASE("repeated users contribute one bank entry per tweet") {
    auto emb = make_embedding({{"u1", {1, 0}}});
    auto ds = tweets_of({{"t1", "u1", Stance::Favor, Split::Train},
                         {"t2", "u1", Stance::Favor, Split::Train}});
    auto m = ClassDistanceModel::fit(ds, emb);
    CHECK(m.bank_size(Stance::Favor) == 2);
}

TEST_CASE("cdist_fit with no known train author is an error") {
    auto emb = make_embedding({{"u9", {1, 0}}});
    auto ds = tweets_of({{"t1", "ghost", Stance::Favor, Split::Train}});
    CHECK_THROWS(ClassDistanceModel::fit(ds, emb));
}

TEST_CASE("cdist_predict matches the worked example") {
    auto emb = make_embedding({{"f1", {1, 0}},
                               {"f2", {0.9, 0.1}},
                               {"a1", {0, 1}}});
    auto ds = tweets_of({{"t1", "f1", Stance::Favor, Split::Train},
                         {"t2", "f2", Stance::Favor, Split::Train},
                         {"t3", "a1", Stance::Against, Split::Train}});
    auto m = ClassDistanceModel::fit(ds, emb);
    Prediction p = m.predict({1, 0.1});
    CHECK(p.label == Stance::Favor);
    CHECK(p.source == PredictionSource::Relational);
    CHECK(p.scores[static_cast<int>(Stance::Favor)] ==
          Catch::Approx(0.992).margin(5e-4));
    CHECK(p.scores[static_cast<int>(Stance::Against)] ==
          Catch::Approx(0.0995).margin(5e-4));
}

TEST_CASE("query equal to a singleton bank vector picks that class") {
    auto emb = make_embedding({{"n1", {0, 0, 2}}, {"f1", {1, 0, 0}}});
    auto ds = tweets_of({{"t1", "n1", Stance::None, Split::Train},
                         {"t2", "f1", Stance::Favor, Split::Train}});
    auto m = ClassDistanceModel::fit(ds, emb);
    CHECK(m.predict({0, 0, 2}).label == Stance::None);
}

TEST_CASE("cdist_predict is scale invariant in the query") {
    auto emb = make_embedding({{"f1", {1, 0.3}}, {"a1", {-0.5, 1}}});
    auto ds = tweets_of({{"t1", "f1", Stance::Favor, Split::Train},
                         {"t2", "a1", Stance::Against, Split::Train}});
    auto m = ClassDistanceModel::fit(ds, emb);
    std::vector<double> q = {0.8, 0.4};
    Stance base = m.predict(q).label;
    for (double s : {0.01, 3.0, 1000.0}) {
        std::vector<double> scaled = {q[0] * s, q[1] * s};
        CHECK(m.predict(scaled).label == base);
    }
}

TEST_CASE("cdist_predict rejects a zero query vector") {
    auto emb = make_embedding({{"f1", {1, 0}}});
    auto ds = tweets_of({{"t1", "f1", Stance::Favor, Split::Train}});
    auto m = ClassDistanceModel::fit(ds, emb);
    CHECK_THROWS(m.predict({0, 0}));
}

TEST_CASE("cdist_predict equals the brute-force oracle on random instances") {
    Rng rng(515);
    for (int trial = 0; trial < 500; ++trial) {
        int dim = 1 + static_cast<int>(rng.uniform_index(10));
        std::array<std::vector<std::vector<double>>, 3> banks;
        std::vector<std::string> users;
        std::vector<double> data;
        TweetDataset ds;
        int total = 2 + static_cast<int>(rng.uniform_index(49)); // <= 50 users
        int added = 0;
        for (int u = 0; u < total; ++u) {
            std::vector<double> vec(dim);
            double norm = 0;
            for (auto& v : vec) {
                v = rng.uniform(-1, 1);
                norm += v * v;
            }
            if (norm < 1e-6) vec[0] = 0.5;
            int cls = static_cast<int>(rng.uniform_index(3));
            banks[cls].push_back(vec);
            std::string name = "u" + std::to_string(u);
            users.push_back(name);
            data.insert(data.end(), vec.begin(), vec.end());
            ds.add({"t" + std::to_string(u), name, "",
                    static_cast<Stance>(cls), Split::Train});
            ++added;
        }
        REQUIRE(added >= 2);
        RelationalEmbedding emb(users, data, dim);
        auto model = ClassDistanceModel::fit(ds, emb);

        std::vector<double> q(dim);
        double nq = 0;
        for (auto& v : q) {
            v = rng.uniform(-1, 1);
            nq += v * v;
        }
        if (nq < 1e-6) q[0] = 1.0;

        std::array<double, 3> oracle_scores;
        Stance oracle = brute_force_cdist(banks, q, oracle_scores);
        Prediction p = model.predict(q);
        REQUIRE(p.label == oracle);
        for (int c = 0; c < 3; ++c) {
            if (banks[c].empty()) continue;
            REQUIRE(std::abs(p.scores[c] - oracle_scores[c]) < 1e-12);
        }
    }
}

TEST_CASE("backoff routes known authors to the relational model") {
    auto emb = make_embedding({{"known", {1, 0}}, {"f1", {0.9, 0.2}},
                               {"a1", {-1, 0.5}}});
    auto ds = tweets_of({{"t1", "f1", Stance::Favor, Split::Train},
                         {"t2", "a1", Stance::Against, Split::Train}});
    auto rel = ClassDistanceModel::fit(ds, emb);
    TextualClassifier textual = [](const LabeledTweet&) {
        Prediction p;
        p.label = Stance::None;
        p.scores = {0, 0, 1};
        return p;
    };

    LabeledTweet known{"t9", "known", "whatever", Stance::None, Split::Test};
    Prediction p = backoff_predict(rel, textual, known, emb);
    CHECK(p.source == PredictionSource::Relational);
    CHECK(p.label == Stance::Favor); // text never consulted

    LabeledTweet unknown{"t10", "ghost", "whatever", Stance::None, Split::Test};
    Prediction q = backoff_predict(rel, textual, unknown, emb);
    CHECK(q.source == PredictionSource::TextualBackoff);
    CHECK(q.label == Stance::None);
}

TEST_CASE("backoff over an all-unknown dataset equals the textual classifier") {
    auto emb = make_embedding({{"f1", {1, 0}}, {"a1", {0, 1}}});
    auto ds = tweets_of({{"t1", "f1", Stance::Favor, Split::Train},
                         {"t2", "a1", Stance::Against, Split::Train}});
    auto rel = ClassDistanceModel::fit(ds, emb);
    TextualClassifier textual = [](const LabeledTweet& t) {
        Prediction p;
        p.label = t.text.size() % 2 ? Stance::Favor : Stance::Against;
        return p;
    };
    for (int i = 0; i < 10; ++i) {
        LabeledTweet t{"x" + std::to_string(i), "ghost" + std::to_string(i),
                       std::string(i, 'a'), Stance::None, Split::Test};
        Prediction direct = textual(t);
        Prediction routed = backoff_predict(rel, textual, t, emb);
        CHECK(routed.label == direct.label);
        CHECK(routed.source == PredictionSource::TextualBackoff);
    }
}

TEST_CASE("concat_features pads and concatenates") {
    CHECK(concat_features({0.5, 0.5}, std::vector<double>{1, 2}, 2) ==
          std::vector<double>{0.5, 0.5, 1, 2});
    CHECK(concat_features({0.5, 0.5}, std::nullopt, 2) ==
          std::vector<double>{0.5, 0.5, 0, 0});
    CHECK_THROWS(concat_features({0.5}, std::vector<double>{1, 2, 3}, 2));
}

TEST_CASE("concat dimension law holds for mixed-availability batches") {
    Rng rng(31);
    for (int i = 0; i < 50; ++i) {
        std::size_t text_dim = 1 + rng.uniform_index(8);
        std::size_t rel_dim = 1 + rng.uniform_index(6);
        std::vector<double> text(text_dim, 0.25);
        std::optional<std::vector<double>> rel;
        if (rng.bernoulli(0.5)) rel = std::vector<double>(rel_dim, 1.0);
        CHECK(concat_features(text, rel, rel_dim).size() == text_dim + rel_dim);
    }
}

TEST_CASE("ensemble with an all-unknown embedding equals text-only") {
    // identical zero suffixes leave all pairwise RBF distances unchanged
    TweetDataset ds;
    Rng rng(12);
    const char* words[] = {"alpha", "beta", "gamma", "delta"};
    for (int i = 0; i < 24; ++i) {
        Stance s = i % 2 ? Stance::Favor : Stance::Against;
        std::string text = s == Stance::Favor ? "alpha beta" : "gamma delta";
        text += " " + std::string(words[rng.uniform_index(4)]);
        ds.add({"t" + std::to_string(i), "author" + std::to_string(i), text, s,
                i < 16 ? Split::Train : Split::Test});
    }
    auto emb = make_embedding({{"nobody", {0.5, 0.5, 0.5}}}); // no ds author known
    std::vector<std::string> train_texts;
    for (const auto& r : ds.records())
        if (r.split == Split::Train) train_texts.push_back(r.text);
    TfidfFeaturizer feat = TfidfFeaturizer::fit(train_texts);

    SvmModel ens = ensemble_fit(ds, feat, emb, 1.0, 0.7);
    CHECK(ens.feature_dim == feat.dim() + 3);

    std::vector<std::vector<double>> X;
    std::vector<Stance> y;
    for (const auto& r : ds.records()) {
        if (r.split != Split::Train) continue;
        X.push_back(feat.features(r.text));
        y.push_back(r.stance);
    }
    SvmModel text_only = svm_fit(X, y, 1.0, 0.7);
    for (const auto& r : ds.records()) {
        if (r.split != Split::Test) continue;
        auto padded = concat_features(feat.features(r.text), std::nullopt, 3);
        CHECK(svm_predict(ens, padded).label ==
              svm_predict(text_only, feat.features(r.text)).label);
    }
}

TEST_CASE("class distance model json round-trips") {
    auto emb = make_embedding({{"f1", {1, 0}}, {"a1", {0, 1}}});
    auto ds = tweets_of({{"t1", "f1", Stance::Favor, Split::Train},
                         {"t2", "a1", Stance::Against, Split::Train}});
    auto m = ClassDistanceModel::fit(ds, emb);
    auto back = ClassDistanceModel::from_json(m.to_json());
    CHECK(back.predict({0.9, 0.1}).label == m.predict({0.9, 0.1}).label);
    nlohmann::json bad = m.to_json();
    bad.erase("version");
    CHECK_THROWS(ClassDistanceModel::from_json(bad));
}
