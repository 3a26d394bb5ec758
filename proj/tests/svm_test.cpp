#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "relstance/rng.hpp"
#include "relstance/svm.hpp"

using namespace relstance;

namespace {

// two round blobs around +-(2,2); separable with margin
void blobs(std::vector<std::vector<double>>& X, std::vector<Stance>& y,
           int per_class = 20, std::uint64_t seed = 3) {
    Rng rng(seed);
    for (int i = 0; i < per_class; ++i) {
        double a = rng.uniform(0, 2 * 3.14159265358979);
        double r = rng.uniform(0, 0.5);
        X.push_back({2 + r * std::cos(a), 2 + r * std::sin(a)});
        y.push_back(Stance::Favor);
    }
    for (int i = 0; i < per_class; ++i) {
        double a = rng.uniform(0, 2 * 3.14159265358979);
        double r = rng.uniform(0, 0.5);
        X.push_back({-2 + r * std::cos(a), -2 + r * std::sin(a)});
        y.push_back(Stance::Against);
    }
}

} // namespace

TEST_CASE("rbf kernel basics") {
    CHECK(rbf_kernel({1, 2, 3}, {1, 2, 3}, 0.7) == 1.0);
    CHECK(rbf_kernel({0, 0}, {1, 0}, 1.0) ==
          Catch::Approx(std::exp(-1.0)).epsilon(1e-12));
    Rng rng(8);
    for (int i = 0; i < 20; ++i) {
        std::vector<double> x = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
        std::vector<double> y = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
        CHECK(rbf_kernel(x, y, 0.5) == rbf_kernel(y, x, 0.5));
    }
    CHECK_THROWS(rbf_kernel({1}, {1, 2}, 1.0));
}

TEST_CASE("separable blobs reach 100% training accuracy") {
    std::vector<std::vector<double>> X;
    std::vector<Stance> y;
    blobs(X, y);
    SvmModel model = svm_fit(X, y, 1.0, 0.5);
    for (std::size_t i = 0; i < X.size(); ++i)
        CHECK(svm_predict(model, X[i]).label == y[i]);
    for (const auto& m : model.machines) {
        CHECK(m.kkt_violation < 1e-3);
        for (double c : m.coef) CHECK(std::abs(c) <= 1.0 + 1e-12); // |a_i y_i| <= C
    }
}

TEST_CASE("every support vector of the separable fixture predicts its own label") {
    std::vector<std::vector<double>> X;
    std::vector<Stance> y;
    blobs(X, y);
    SvmModel model = svm_fit(X, y, 1.0, 0.5);
    // 2-class fixture: in the FAVOR machine, coef > 0 marks FAVOR points
    // and coef < 0 marks AGAINST points
    for (const auto& m : model.machines) {
        Stance other =
            m.positive_class == Stance::Favor ? Stance::Against : Stance::Favor;
        for (std::size_t i = 0; i < m.support_vectors.size(); ++i) {
            Stance truth = m.coef[i] > 0 ? m.positive_class : other;
            CHECK(svm_predict(model, m.support_vectors[i]).label == truth);
        }
    }
}

TEST_CASE("XOR pattern is classified correctly with an RBF kernel") {
    std::vector<std::vector<double>> X = {{0, 0}, {1, 1}, {0, 1}, {1, 0}};
    std::vector<Stance> y = {Stance::Favor, Stance::Favor, Stance::Against,
                             Stance::Against};
    SvmModel model = svm_fit(X, y, 10.0, 1.0);
    for (std::size_t i = 0; i < X.size(); ++i)
        CHECK(svm_predict(model, X[i]).label == y[i]);
}

TEST_CASE("binary smo solution satisfies the box and KKT conditions") {
    std::vector<std::vector<double>> X;
    std::vector<Stance> y;
    blobs(X, y);
    std::vector<int> yy;
    for (Stance s : y) yy.push_back(s == Stance::Favor ? 1 : -1);
    const double C = 2.5, gamma = 0.8;
    BinarySvc sol = smo_solve(X, yy, C, gamma, {}, 10 * X.size() * 2);
    for (double a : sol.alpha) {
        CHECK(a >= 0.0);
        CHECK(a <= C);
    }
    // independent recomputation of the optimality gap from the raw alphas
    CHECK(kkt_violation(X, yy, sol.alpha, C, gamma) < 1e-3);
}

TEST_CASE("duplicating every row leaves predictions on the originals unchanged") {
    std::vector<std::vector<double>> X;
    std::vector<Stance> y;
    blobs(X, y, 12);
    SvmModel base = svm_fit(X, y, 1.0, 0.5);
    std::vector<std::vector<double>> X2 = X;
    std::vector<Stance> y2 = y;
    X2.insert(X2.end(), X.begin(), X.end());
    y2.insert(y2.end(), y.begin(), y.end());
    SvmModel doubled = svm_fit(X2, y2, 1.0, 0.5);
    for (const auto& x : X)
        CHECK(svm_predict(doubled, x).label == svm_predict(base, x).label);
}

TEST_CASE("prediction ties break in the fixed class order") {
    // exact ties resolve AGAINST < FAVOR < NONE
    CHECK(argmax_stance({0.5, 0.5, 0.1}) == Stance::Against);
    CHECK(argmax_stance({0.1, 0.4, 0.4}) == Stance::Favor);
    CHECK(argmax_stance({0.2, 0.2, 0.2}) == Stance::Against);

    // symmetric 2-class fixture: the two machines are exact negations of
    // each other, so x=0 scores are +-f(0) with f(0) within solver
    // tolerance of zero; the outcome is deterministic across refits
    std::vector<std::vector<double>> X = {{-1}, {-2}, {1}, {2}};
    std::vector<Stance> y = {Stance::Against, Stance::Against, Stance::Favor,
                             Stance::Favor};
    SvmModel model = svm_fit(X, y, 5.0, 0.5);
    Prediction p = svm_predict(model, {0.0});
    CHECK(p.scores[0] == Catch::Approx(-p.scores[1]).margin(1e-12));
    CHECK(std::abs(p.scores[0]) < 2e-3);
    Prediction again = svm_predict(svm_fit(X, y, 5.0, 0.5), {0.0});
    CHECK(again.label == p.label);
}

TEST_CASE("svm_fit input validation") {
    CHECK_THROWS(svm_fit({{1, 0}, {0, 1}},
                         {Stance::Favor, Stance::Favor}, 1.0, 0.5));
    double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS(svm_fit({{1, 0}, {inf, 1}},
                         {Stance::Favor, Stance::Against}, 1.0, 0.5));
    SvmModel model =
        svm_fit({{1, 0}, {0, 1}}, {Stance::Favor, Stance::Against}, 1.0, 0.5);
    CHECK_THROWS(svm_predict(model, {1, 0, 0}));
}

TEST_CASE("svm training is deterministic for a fixed input order") {
    std::vector<std::vector<double>> X;
    std::vector<Stance> y;
    blobs(X, y);
    SvmModel a = svm_fit(X, y, 1.0, 0.5);
    SvmModel b = svm_fit(X, y, 1.0, 0.5);
    CHECK(a.to_json() == b.to_json());
}

TEST_CASE("svm model json round-trips and requires a version field") {
    std::vector<std::vector<double>> X;
    std::vector<Stance> y;
    blobs(X, y, 8);
    SvmModel model = svm_fit(X, y, 1.0, 0.5);
    SvmModel back = SvmModel::from_json(model.to_json());
    for (const auto& x : X)
        CHECK(svm_predict(back, x).label == svm_predict(model, x).label);
    nlohmann::json bad = model.to_json();
    bad.erase("version");
    CHECK_THROWS(SvmModel::from_json(bad));
}
