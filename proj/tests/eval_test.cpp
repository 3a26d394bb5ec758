#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "relstance/eval.hpp"
#include "relstance/grid_search.hpp"
#include "relstance/rng.hpp"
#include "relstance/synth.hpp"

using namespace relstance;

namespace {

// independent F1 oracle: per-class loops over the raw label sequences
struct OracleF1 {
    double f1_against, f1_favor, f1_avg;
};

OracleF1 brute_force_f1(const std::vector<Stance>& gold,
                        const std::vector<Stance>& pred) {
    auto f1_of = [&](Stance cls) {
        long tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < gold.size(); ++i) {
            if (pred[i] == cls && gold[i] == cls) ++tp;
            if (pred[i] == cls && gold[i] != cls) ++fp;
            if (pred[i] != cls && gold[i] == cls) ++fn;
        }
        double p = tp + fp ? double(tp) / double(tp + fp) : 0.0;
        double r = tp + fn ? double(tp) / double(tp + fn) : 0.0;
        return p + r > 0 ? 2 * p * r / (p + r) : 0.0;
    };
    OracleF1 o;
    o.f1_against = f1_of(Stance::Against);
    o.f1_favor = f1_of(Stance::Favor);
    o.f1_avg = (o.f1_against + o.f1_favor) / 2;
    return o;
}

TweetDataset n_tweets(int n, int users = 0) {
    // users == 0: one author per tweet; otherwise round-robin authors
    TweetDataset ds;
    for (int i = 0; i < n; ++i) {
        std::string author =
            users ? "u" + std::to_string(i % users) : "a" + std::to_string(i);
        ds.add({"t" + std::to_string(i), author, "text",
                static_cast<Stance>(i % 3), Split::Train});
    }
    return ds;
}

} // namespace

TEST_CASE("perfect predictions give f1_avg 1") {
    std::vector<Stance> gold = {Stance::Favor, Stance::Against, Stance::None,
                                Stance::Favor};
    EvalReport r = f1_favor_against(gold, gold);
    CHECK(r.f1_avg == 1.0);
    CHECK(r.n == 4);
}

TEST_CASE("f1 matches the worked example") {
    using enum Stance;
    std::vector<Stance> gold = {Favor, Favor, Against, Against, None};
    std::vector<Stance> pred = {Favor, Against, Against, Against, None};
    EvalReport r = f1_favor_against(gold, pred);
    CHECK(r.f1_favor == Catch::Approx(2.0 / 3.0).margin(1e-4));
    CHECK(r.f1_against == Catch::Approx(0.8).margin(1e-4));
    CHECK(r.f1_avg == Catch::Approx(0.7333).margin(1e-4));
    CHECK(r.f1_avg == (r.f1_against + r.f1_favor) / 2.0);
}

TEST_CASE("all-NONE sequences give f1_avg 0 by the 0/0 convention") {
    std::vector<Stance> gold(5, Stance::None);
    EvalReport r = f1_favor_against(gold, gold);
    CHECK(r.f1_avg == 0.0);
    CHECK(r.per_class[static_cast<int>(Stance::None)].f1 == 1.0);
}

TEST_CASE("f1 rejects length mismatches") {
    CHECK_THROWS(f1_favor_against({Stance::Favor}, {}));
}

TEST_CASE("f1 equals brute-force counting on 1000 random sequences") {
    Rng rng(88);
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t n = 1 + rng.uniform_index(60);
        std::vector<Stance> gold(n), pred(n);
        for (std::size_t i = 0; i < n; ++i) {
            gold[i] = static_cast<Stance>(rng.uniform_index(3));
            pred[i] = static_cast<Stance>(rng.uniform_index(3));
        }
        EvalReport r = f1_favor_against(gold, pred);
        OracleF1 o = brute_force_f1(gold, pred);
        REQUIRE(r.f1_against == o.f1_against);
        REQUIRE(r.f1_favor == o.f1_favor);
        REQUIRE(r.f1_avg == o.f1_avg);
    }
}

TEST_CASE("confusion matrix counts and serializes") {
    using enum Stance;
    auto m = ConfusionMatrix::from_labels({Favor, Favor, Against},
                                          {Favor, Against, Against});
    CHECK(m.at(Favor, Favor) == 1);
    CHECK(m.at(Favor, Against) == 1);
    CHECK(m.at(Against, Against) == 1);
    CHECK(m.total() == 3);
    std::ostringstream out;
    m.write_tsv(out);
    CHECK(out.str().find("gold\\pred\tAGAINST\tFAVOR\tNONE") == 0);
}

TEST_CASE("kfold BY_TWEET gives balanced disjoint exhaustive folds") {
    TweetDataset ds = n_tweets(10);
    auto folds = kfold_split(ds, 5, 3, KfoldMode::ByTweet);
    REQUIRE(folds.size() == 5);
    std::set<std::size_t> all;
    for (const auto& f : folds) {
        CHECK(f.val_indices.size() == 2);
        CHECK(f.train_indices.size() == 8);
        for (auto i : f.val_indices) {
            CHECK(all.insert(i).second); // pairwise disjoint
        }
    }
    CHECK(all.size() == 10); // exhaustive
}

TEST_CASE("kfold BY_USER keeps authors on one side of each fold") {
    TweetDataset ds = n_tweets(12, 4); // 4 users x 3 tweets
    auto folds = kfold_split(ds, 2, 9, KfoldMode::ByUser);
    for (const auto& f : folds) {
        std::set<std::string> val_users, train_users;
        for (auto i : f.val_indices) val_users.insert(ds.records()[i].author);
        for (auto i : f.train_indices) train_users.insert(ds.records()[i].author);
        for (const auto& u : val_users) CHECK(train_users.count(u) == 0);
    }
}

TEST_CASE("kfold is deterministic under a fixed seed") {
    TweetDataset ds = n_tweets(23);
    auto a = kfold_split(ds, 4, 17, KfoldMode::ByTweet);
    auto b = kfold_split(ds, 4, 17, KfoldMode::ByTweet);
    for (std::size_t f = 0; f < a.size(); ++f)
        CHECK(a[f].val_indices == b[f].val_indices);
}

TEST_CASE("kfold rejects too many folds") {
    TweetDataset ds = n_tweets(3);
    CHECK_THROWS(kfold_split(ds, 4, 1, KfoldMode::ByTweet));
    TweetDataset two_users = n_tweets(10, 2);
    CHECK_THROWS(kfold_split(two_users, 3, 1, KfoldMode::ByUser));
}

TEST_CASE("grid search with a single cell returns that cell") {
    SynthConfig cfg = preset_config(SynthPreset::Clean, 4);
    cfg.n_users = 60;
    cfg.communities = {{Stance::Against, 20, 1.0},
                       {Stance::Favor, 20, 1.0},
                       {Stance::None, 20, 1.0}};
    cfg.pairs_per_user = 10;
    SynthData data = generate(cfg);

    GridSpec grid;
    grid.dims = {4};
    grid.C_values = {2.0};
    grid.gamma_values = {0.5};
    grid.folds = 3;
    grid.seed = 4;
    TrainConfig base;
    base.epochs = 30;
    base.initial_lr = 0.1;
    base.subsample_t = 1.0;
    base.seed = 4;

    InteractionSet no_friends;
    auto result = grid_search(data.tweets, data.retweets, no_friends, grid,
                              GridSystem::RelembSvm, base);
    REQUIRE(result.table.size() == 1); // retweets only: single mode, single cell
    CHECK(result.best.C == 2.0);
    CHECK(result.best.gamma == 0.5);
    CHECK(result.best.dim == 4);
}

TEST_CASE("grid search prefers the informative edge set") {
    SynthConfig cfg = preset_config(SynthPreset::Clean, 21);
    cfg.n_users = 90;
    cfg.communities = {{Stance::Against, 30, 1.0},
                       {Stance::Favor, 30, 1.0},
                       {Stance::None, 30, 1.0}};
    cfg.pairs_per_user = 12;
    cfg.unknown_user_fraction = 0.0;
    SynthData data = generate(cfg);

    // friends: same degree sequence, targets shuffled into noise
    Rng rng(77);
    InteractionSet noisy_friends;
    {
        std::vector<std::string> targets;
        for (const auto& p : data.friends.pairs()) targets.push_back(p.target);
        rng.shuffle(targets);
        std::size_t i = 0;
        for (const auto& p : data.friends.pairs()) {
            std::string t = targets[i++];
            if (t == p.source) t = targets[(i + 7) % targets.size()];
            noisy_friends.add({p.source, t, InteractionKind::Friend});
        }
    }

    GridSpec grid;
    grid.dims = {8};
    grid.C_values = {10.0};
    grid.gamma_values = {0.5};
    grid.folds = 3;
    grid.seed = 21;
    TrainConfig base;
    base.epochs = 60;
    base.initial_lr = 0.15;
    base.subsample_t = 1.0;
    base.seed = 21;

    auto result = grid_search(data.tweets, data.retweets, noisy_friends, grid,
                              GridSystem::RelembSvm, base);
    REQUIRE(result.table.size() == 3); // RETWEET, FRIENDS, MIXED
    REQUIRE(result.best.mode.has_value());
    CHECK(*result.best.mode == CorpusMode::Retweet);
}

TEST_CASE("grid search offers the paper-default dims") {
    GridSpec grid;
    CHECK(grid.dims == std::vector<int>{10, 20});
}

TEST_CASE("grid search is reproducible under a fixed seed") {
    SynthConfig cfg = preset_config(SynthPreset::Overlap, 5);
    cfg.n_users = 60;
    cfg.communities = {{Stance::Against, 20, 0.9},
                       {Stance::Favor, 20, 0.9},
                       {Stance::None, 20, 0.9}};
    cfg.pairs_per_user = 8;
    SynthData data = generate(cfg);
    GridSpec grid;
    grid.dims = {4};
    grid.C_values = {1.0, 5.0};
    grid.gamma_values = {0.5};
    grid.folds = 2;
    grid.seed = 5;
    TrainConfig base;
    base.epochs = 10;
    base.subsample_t = 1.0;
    base.seed = 5;
    auto a = grid_search(data.tweets, data.retweets, data.friends, grid,
                         GridSystem::RelembSvm, base);
    auto b = grid_search(data.tweets, data.retweets, data.friends, grid,
                         GridSystem::RelembSvm, base);
    CHECK(cv_table_to_json(a) == cv_table_to_json(b));
}

TEST_CASE("grid validation") {
    GridSpec g;
    g.folds = 1;
    CHECK_THROWS(g.validate());
    g.folds = 5;
    g.dims.clear();
    CHECK_THROWS(g.validate());
}
