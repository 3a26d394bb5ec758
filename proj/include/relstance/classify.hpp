#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "relstance/core.hpp"
#include "relstance/relemb.hpp"
#include "relstance/svm.hpp"
#include "relstance/textfeat.hpp"

namespace relstance {

enum class Similarity : int { Cosine = 0, NegEuclidean = 1 };

inline const char* to_string(Similarity s) {
    return s == Similarity::Cosine ? "cosine" : "negative-euclidean";
}

inline Similarity similarity_from_string(const std::string& s) {
    if (s == "cosine") return Similarity::Cosine;
    if (s == "negative-euclidean") return Similarity::NegEuclidean;
    throw std::runtime_error("unknown similarity: '" + s + "'");
}

namespace detail {

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        dot += a[j] * b[j];
        na += a[j] * a[j];
        nb += b[j] * b[j];
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

inline double neg_euclidean(const std::vector<double>& a,
                            const std::vector<double>& b) {
    double sq = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double d = a[j] - b[j];
        sq += d * d;
    }
    return -std::sqrt(sq);
}

inline bool is_zero_vector(const std::vector<double>& v) {
    for (double x : v)
        if (x != 0.0) return false;
    return true;
}

} // namespace detail

// Per-class banks of author vectors from TRAIN tweets. A user with two
// labeled tweets contributes twice (per-tweet projection).
class ClassDistanceModel {
public:
    static ClassDistanceModel fit(const TweetDataset& train,
                                  const RelationalEmbedding& emb,
                                  Similarity sim = Similarity::Cosine) {
        ClassDistanceModel m;
        m.sim_ = sim;
        for (const auto& r : train.records()) {
            if (r.split != Split::Train) continue;
            if (!emb.is_known(r.author)) continue; // zero vectors stay out
            std::vector<double> v = emb.lookup(r.author);
            if (detail::is_zero_vector(v)) continue;
            m.banks_[static_cast<int>(r.stance)].push_back(std::move(v));
        }
        if (m.banks_[0].empty() && m.banks_[1].empty() && m.banks_[2].empty())
            throw std::runtime_error(
                "class-distance fit: no train tweet has a known author");
        return m;
    }

    // score(c) = mean similarity of the query to every bank member;
    // classes with empty banks are excluded from the argmax.
    Prediction predict(const std::vector<double>& query) const {
        if (detail::is_zero_vector(query))
            throw std::runtime_error(
                "class-distance predict: zero query vector (route unknown "
                "authors to the textual back-off)");
        Prediction p;
        p.source = PredictionSource::Relational;
        for (int c = 0; c < 3; ++c) {
            const auto& bank = banks_[c];
            if (bank.empty()) {
                p.scores[c] = -std::numeric_limits<double>::infinity();
                continue;
            }
            double total = 0.0;
            for (const auto& u : bank)
                total += sim_ == Similarity::Cosine ? detail::cosine(query, u)
                                                    : detail::neg_euclidean(query, u);
            p.scores[c] = total / static_cast<double>(bank.size());
        }
        p.label = argmax_stance(p.scores);
        return p;
    }

    std::size_t bank_size(Stance c) const {
        return banks_[static_cast<int>(c)].size();
    }
    Similarity similarity() const { return sim_; }

    nlohmann::json to_json() const {
        nlohmann::json jb = nlohmann::json::object();
        for (Stance c : kAllStances)
            jb[to_string(c)] = banks_[static_cast<int>(c)];
        return {{"version", 1},
                {"type", "class_distance"},
                {"similarity", to_string(sim_)},
                {"banks", jb}};
    }

    static ClassDistanceModel from_json(const nlohmann::json& j) {
        if (!j.contains("version"))
            throw std::runtime_error("class-distance model json is missing 'version'");
        ClassDistanceModel m;
        m.sim_ = similarity_from_string(j.at("similarity").get<std::string>());
        for (Stance c : kAllStances)
            m.banks_[static_cast<int>(c)] =
                j.at("banks").at(to_string(c)).get<std::vector<std::vector<double>>>();
        return m;
    }

private:
    std::array<std::vector<std::vector<double>>, 3> banks_;
    Similarity sim_ = Similarity::Cosine;
};

using TextualClassifier = std::function<Prediction(const LabeledTweet&)>;

// Relational class-distance prediction when the author is known, textual
// prediction otherwise. Zero vectors never reach the distance rule.
inline Prediction backoff_predict(const ClassDistanceModel& rel,
                                  const TextualClassifier& textual,
                                  const LabeledTweet& tweet,
                                  const RelationalEmbedding& emb) {
    if (emb.is_known(tweet.author)) {
        std::vector<double> v = emb.lookup(tweet.author);
        if (!detail::is_zero_vector(v)) return rel.predict(v);
    }
    Prediction p = textual(tweet);
    p.source = PredictionSource::TextualBackoff;
    return p;
}

// text_vec ++ rel_vec, zero-padding the relational block when absent.
// Output dimension is always |text_vec| + rel_dim.
inline std::vector<double> concat_features(
    const std::vector<double>& text_vec,
    const std::optional<std::vector<double>>& rel_vec, std::size_t rel_dim) {
    if (rel_vec && rel_vec->size() != rel_dim)
        throw std::runtime_error("concat_features: relational vector has dim " +
                                 std::to_string(rel_vec->size()) + ", expected " +
                                 std::to_string(rel_dim));
    std::vector<double> out;
    out.reserve(text_vec.size() + rel_dim);
    out.insert(out.end(), text_vec.begin(), text_vec.end());
    if (rel_vec)
        out.insert(out.end(), rel_vec->begin(), rel_vec->end());
    else
        out.resize(text_vec.size() + rel_dim, 0.0);
    return out;
}

// Dense text features for one tweet; implementations must be fitted on
// TRAIN texts only.
class TextFeaturizer {
public:
    virtual ~TextFeaturizer() = default;
    virtual std::vector<double> features(const std::string& text) const = 0;
    virtual std::size_t dim() const = 0;
    virtual nlohmann::json to_json() const = 0;
};

class TfidfFeaturizer final : public TextFeaturizer {
public:
    explicit TfidfFeaturizer(TfIdfModel model) : model_(std::move(model)) {}

    static TfidfFeaturizer fit(const std::vector<std::string>& train_texts,
                               std::optional<std::size_t> max_features = {}) {
        std::vector<std::vector<std::string>> corpus;
        corpus.reserve(train_texts.size());
        for (const auto& t : train_texts) corpus.push_back(tokenize(t));
        return TfidfFeaturizer(TfIdfModel::fit(corpus, max_features));
    }

    std::vector<double> features(const std::string& text) const override {
        return model_.transform(tokenize(text)).to_dense();
    }
    std::size_t dim() const override { return model_.vocab_size(); }
    nlohmann::json to_json() const override { return model_.to_json(); }
    const TfIdfModel& model() const { return model_; }

private:
    TfIdfModel model_;
};

class AvgVecFeaturizer final : public TextFeaturizer {
public:
    explicit AvgVecFeaturizer(std::shared_ptr<const WordVectorTable> table)
        : table_(std::move(table)) {}

    std::vector<double> features(const std::string& text) const override {
        return avg_word_vectors(tokenize(text), *table_).mean;
    }
    std::size_t dim() const override { return table_->dim(); }
    nlohmann::json to_json() const override {
        return {{"version", 1},
                {"type", "avgvec"},
                {"dim", table_->dim()},
                {"words", table_->size()}};
    }

private:
    std::shared_ptr<const WordVectorTable> table_;
};

// SVM over concatenated text + relational rows (TF-IDF rows are densified
// at concatenation). Unknown authors contribute a zero relational block.
inline SvmModel ensemble_fit(const TweetDataset& train,
                             const TextFeaturizer& featurizer,
                             const RelationalEmbedding& emb, double C,
                             double gamma, const SmoOptions& opt = {}) {
    std::vector<std::vector<double>> X;
    std::vector<Stance> y;
    const std::size_t rel_dim = static_cast<std::size_t>(emb.dim());
    for (const auto& r : train.records()) {
        if (r.split != Split::Train) continue;
        std::optional<std::vector<double>> rel;
        if (emb.is_known(r.author)) rel = emb.lookup(r.author);
        X.push_back(concat_features(featurizer.features(r.text), rel, rel_dim));
        y.push_back(r.stance);
    }
    if (X.empty()) throw std::runtime_error("ensemble_fit: no TRAIN records");
    return svm_fit(X, y, C, gamma, opt);
}

} // namespace relstance
