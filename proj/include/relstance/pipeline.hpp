#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "relstance/classify.hpp"
#include "relstance/core.hpp"
#include "relstance/eval.hpp"
#include "relstance/relemb.hpp"
#include "relstance/svm.hpp"
#include "relstance/textfeat.hpp"

namespace relstance {

enum class TextualKind : int { Tfidf = 0, Ftemb = 1 };

struct SystemSpec {
    enum class Family : int { RelembSvm, Textual, Backoff, Ensemble } family =
        Family::Textual;
    TextualKind textual = TextualKind::Tfidf;
};

// relemb-svm | tfidf-svm | ftemb-svm | backoff:<textual> | ensemble:<textual>
inline SystemSpec parse_system(const std::string& name) {
    SystemSpec s;
    auto textual_of = [](const std::string& t) {
        if (t == "tfidf-svm") return TextualKind::Tfidf;
        if (t == "ftemb-svm") return TextualKind::Ftemb;
        throw std::runtime_error("unknown textual system: '" + t + "'");
    };
    if (name == "relemb-svm") {
        s.family = SystemSpec::Family::RelembSvm;
    } else if (name == "tfidf-svm" || name == "ftemb-svm") {
        s.family = SystemSpec::Family::Textual;
        s.textual = textual_of(name);
    } else if (name.rfind("backoff:", 0) == 0) {
        s.family = SystemSpec::Family::Backoff;
        s.textual = textual_of(name.substr(8));
    } else if (name.rfind("ensemble:", 0) == 0) {
        s.family = SystemSpec::Family::Ensemble;
        s.textual = textual_of(name.substr(9));
    } else {
        throw std::runtime_error("unknown system: '" + name + "'");
    }
    return s;
}

inline std::string system_name(const SystemSpec& s) {
    auto textual = s.textual == TextualKind::Tfidf ? "tfidf-svm" : "ftemb-svm";
    switch (s.family) {
    case SystemSpec::Family::RelembSvm: return "relemb-svm";
    case SystemSpec::Family::Textual: return textual;
    case SystemSpec::Family::Backoff: return std::string("backoff:") + textual;
    case SystemSpec::Family::Ensemble: return std::string("ensemble:") + textual;
    }
    return "?";
}

inline bool needs_embedding(const SystemSpec& s) {
    return s.family != SystemSpec::Family::Textual;
}

inline bool needs_word_vectors(const SystemSpec& s) {
    return s.family != SystemSpec::Family::RelembSvm &&
           s.textual == TextualKind::Ftemb;
}

struct PipelineConfig {
    SystemSpec system;
    double C = 1.0;
    double gamma = 0.5;
    std::optional<std::size_t> max_features; // tf-idf cap
    Similarity similarity = Similarity::Cosine;
    SmoOptions smo;
};

struct PipelineResult {
    std::vector<std::string> test_ids;
    std::vector<Stance> test_gold;
    std::vector<Prediction> predictions;
    EvalReport report;
    ConfusionMatrix confusion;
    nlohmann::json models; // fitted model artifacts, JSON-serialized
};

namespace detail {

inline std::unique_ptr<TextFeaturizer> fit_featurizer(
    const TweetDataset& data, TextualKind kind,
    const std::optional<std::size_t>& max_features,
    std::shared_ptr<const WordVectorTable> wordvecs) {
    if (kind == TextualKind::Tfidf) {
        std::vector<std::string> train_texts;
        for (const auto& r : data.records())
            if (r.split == Split::Train) train_texts.push_back(r.text);
        if (train_texts.empty())
            throw std::runtime_error("no TRAIN records to fit the featurizer on");
        return std::make_unique<TfidfFeaturizer>(
            TfidfFeaturizer::fit(train_texts, max_features));
    }
    if (!wordvecs)
        throw std::runtime_error("ftemb system requires a word-vector table");
    return std::make_unique<AvgVecFeaturizer>(std::move(wordvecs));
}

inline SvmModel fit_textual_svm(const TweetDataset& data,
                                const TextFeaturizer& featurizer,
                                const PipelineConfig& cfg) {
    std::vector<std::vector<double>> X;
    std::vector<Stance> y;
    for (const auto& r : data.records()) {
        if (r.split != Split::Train) continue;
        X.push_back(featurizer.features(r.text));
        y.push_back(r.stance);
    }
    if (X.empty()) throw std::runtime_error("no TRAIN records");
    return svm_fit(X, y, cfg.C, cfg.gamma, cfg.smo);
}

} // namespace detail

// Fits the selected system on the TRAIN split and predicts the TEST split.
// Featurizers only ever see TRAIN texts.
inline PipelineResult run_pipeline(const TweetDataset& data,
                                   const RelationalEmbedding* emb,
                                   std::shared_ptr<const WordVectorTable> wordvecs,
                                   const PipelineConfig& cfg) {
    const SystemSpec& sys = cfg.system;
    if (needs_embedding(sys) && emb == nullptr)
        throw std::runtime_error(system_name(sys) + " requires an embedding");
    if (needs_word_vectors(sys) && wordvecs == nullptr)
        throw std::runtime_error(system_name(sys) + " requires word vectors");

    std::vector<const LabeledTweet*> test;
    for (const auto& r : data.records())
        if (r.split == Split::Test) test.push_back(&r);
    if (test.empty()) throw std::runtime_error("dataset has no TEST records");

    PipelineResult out;
    out.models = nlohmann::json::object();
    auto predict_all = [&](const std::function<Prediction(const LabeledTweet&)>& f) {
        for (const auto* t : test) {
            out.test_ids.push_back(t->tweet_id);
            out.test_gold.push_back(t->stance);
            out.predictions.push_back(f(*t));
        }
    };

    switch (sys.family) {
    case SystemSpec::Family::RelembSvm: {
        std::vector<std::vector<double>> X;
        std::vector<Stance> y;
        for (const auto& r : data.records()) {
            if (r.split != Split::Train) continue;
            X.push_back(emb->lookup(r.author)); // zeros for unknown authors
            y.push_back(r.stance);
        }
        if (X.empty()) throw std::runtime_error("no TRAIN records");
        SvmModel model = svm_fit(X, y, cfg.C, cfg.gamma, cfg.smo);
        out.models["svm"] = model.to_json();
        predict_all([&](const LabeledTweet& t) {
            return svm_predict(model, emb->lookup(t.author),
                               PredictionSource::Relational);
        });
        break;
    }
    case SystemSpec::Family::Textual: {
        auto featurizer =
            detail::fit_featurizer(data, sys.textual, cfg.max_features, wordvecs);
        SvmModel model = detail::fit_textual_svm(data, *featurizer, cfg);
        out.models["featurizer"] = featurizer->to_json();
        out.models["svm"] = model.to_json();
        predict_all([&](const LabeledTweet& t) {
            return svm_predict(model, featurizer->features(t.text),
                               PredictionSource::TextualBackoff);
        });
        break;
    }
    case SystemSpec::Family::Backoff: {
        auto featurizer =
            detail::fit_featurizer(data, sys.textual, cfg.max_features, wordvecs);
        SvmModel text_model = detail::fit_textual_svm(data, *featurizer, cfg);
        ClassDistanceModel rel = ClassDistanceModel::fit(data, *emb, cfg.similarity);
        out.models["featurizer"] = featurizer->to_json();
        out.models["textual_svm"] = text_model.to_json();
        out.models["class_distance"] = rel.to_json();
        TextualClassifier textual = [&](const LabeledTweet& t) {
            return svm_predict(text_model, featurizer->features(t.text),
                               PredictionSource::TextualBackoff);
        };
        predict_all([&](const LabeledTweet& t) {
            return backoff_predict(rel, textual, t, *emb);
        });
        break;
    }
    case SystemSpec::Family::Ensemble: {
        auto featurizer =
            detail::fit_featurizer(data, sys.textual, cfg.max_features, wordvecs);
        SvmModel model =
            ensemble_fit(data, *featurizer, *emb, cfg.C, cfg.gamma, cfg.smo);
        out.models["featurizer"] = featurizer->to_json();
        out.models["svm"] = model.to_json();
        const std::size_t rel_dim = static_cast<std::size_t>(emb->dim());
        predict_all([&](const LabeledTweet& t) {
            std::optional<std::vector<double>> rel;
            if (emb->is_known(t.author)) rel = emb->lookup(t.author);
            return svm_predict(model,
                               concat_features(featurizer->features(t.text), rel,
                                               rel_dim),
                               PredictionSource::Ensemble);
        });
        break;
    }
    }

    std::vector<Stance> pred_labels;
    pred_labels.reserve(out.predictions.size());
    for (const auto& p : out.predictions) pred_labels.push_back(p.label);
    out.report = f1_favor_against(out.test_gold, pred_labels);
    out.confusion = ConfusionMatrix::from_labels(out.test_gold, pred_labels);
    return out;
}

inline void write_predictions_tsv(const PipelineResult& r, std::ostream& out) {
    out << "tweet_id\tlabel\tsource\n";
    for (std::size_t i = 0; i < r.test_ids.size(); ++i)
        out << r.test_ids[i] << '\t' << to_string(r.predictions[i].label) << '\t'
            << to_string(r.predictions[i].source) << '\n';
}

} // namespace relstance
