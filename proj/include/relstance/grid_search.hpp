#pragma once

#include <cstdint>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "relstance/eval.hpp"
#include "relstance/pipeline.hpp"
#include "relstance/relemb.hpp"

namespace relstance {

struct GridSpec {
    std::vector<int> dims = {10, 20}; // paper-default search values
    std::vector<double> C_values = {1.0, 10.0};
    std::vector<double> gamma_values = {0.1, 1.0};
    std::size_t folds = 5;
    std::uint64_t seed = 1;
    KfoldMode fold_mode = KfoldMode::ByTweet;

    void validate() const {
        if (folds < 2) throw std::runtime_error("grid: folds must be >= 2");
        if (dims.empty() || C_values.empty() || gamma_values.empty())
            throw std::runtime_error("grid: dims, C and gamma lists must be non-empty");
    }
};

enum class GridSystem : int { RelembSvm = 0, TfidfSvm = 1, FtembSvm = 2 };

inline GridSystem grid_system_from_string(const std::string& s) {
    if (s == "relemb-svm") return GridSystem::RelembSvm;
    if (s == "tfidf-svm") return GridSystem::TfidfSvm;
    if (s == "ftemb-svm") return GridSystem::FtembSvm;
    throw std::runtime_error("cv supports relemb-svm, tfidf-svm and ftemb-svm; got '" +
                             s + "'");
}

struct CvCell {
    std::optional<CorpusMode> mode; // relemb-svm only
    std::optional<int> dim;         // relemb-svm only
    double C = 1.0;
    double gamma = 0.5;
    std::vector<double> fold_f1;
    double mean_f1 = 0.0;
};

struct GridSearchResult {
    std::vector<CvCell> table;
    CvCell best;
};

namespace detail {

// Restrict to TRAIN records; CV folds never touch the TEST split.
inline TweetDataset train_subset(const TweetDataset& data) {
    TweetDataset out;
    for (const auto& r : data.records())
        if (r.split == Split::Train) out.add(r);
    return out;
}

inline TweetDataset fold_view(const TweetDataset& train,
                              const std::vector<std::size_t>& train_idx,
                              const std::vector<std::size_t>& val_idx) {
    TweetDataset out;
    for (std::size_t i : train_idx) {
        LabeledTweet t = train.records()[i];
        t.split = Split::Train;
        out.add(std::move(t));
    }
    for (std::size_t i : val_idx) {
        LabeledTweet t = train.records()[i];
        t.split = Split::Test;
        out.add(std::move(t));
    }
    return out;
}

inline double cv_mean_f1(const TweetDataset& train, const std::vector<Fold>& folds,
                         const PipelineConfig& cfg, const RelationalEmbedding* emb,
                         std::shared_ptr<const WordVectorTable> wordvecs,
                         std::vector<double>& fold_f1) {
    double total = 0.0;
    for (const auto& fold : folds) {
        TweetDataset view = fold_view(train, fold.train_indices, fold.val_indices);
        PipelineResult r = run_pipeline(view, emb, wordvecs, cfg);
        fold_f1.push_back(r.report.f1_avg);
        total += r.report.f1_avg;
    }
    return total / static_cast<double>(folds.size());
}

// (mean desc, then dim, C, gamma, mode ascending) — ties go to the
// smaller model.
inline bool better_cell(const CvCell& a, const CvCell& b) {
    if (a.mean_f1 != b.mean_f1) return a.mean_f1 > b.mean_f1;
    int ad = a.dim.value_or(0), bd = b.dim.value_or(0);
    if (ad != bd) return ad < bd;
    if (a.C != b.C) return a.C < b.C;
    if (a.gamma != b.gamma) return a.gamma < b.gamma;
    int am = a.mode ? static_cast<int>(*a.mode) : -1;
    int bm = b.mode ? static_cast<int>(*b.mode) : -1;
    return am < bm;
}

} // namespace detail

// For relemb-svm the search spans embedding type x dim x C x gamma; the
// embeddings are unsupervised, so one per (mode, dim) is trained on the
// full interaction data and shared across folds. Textual systems search
// C x gamma only. Modes whose pair source is empty are skipped.
inline GridSearchResult grid_search(const TweetDataset& data,
                                    const InteractionSet& retweets,
                                    const InteractionSet& friends,
                                    const GridSpec& grid, GridSystem system,
                                    const TrainConfig& emb_base = {},
                                    std::shared_ptr<const WordVectorTable> wordvecs =
                                        nullptr) {
    grid.validate();
    TweetDataset train = detail::train_subset(data);
    if (train.size() == 0)
        throw std::runtime_error("grid_search: dataset has no TRAIN records");
    std::vector<Fold> folds =
        kfold_split(train, grid.folds, grid.seed, grid.fold_mode);

    GridSearchResult result;
    bool have_best = false;

    auto consider = [&](CvCell cell) {
        if (!have_best || detail::better_cell(cell, result.best)) {
            result.best = cell;
            have_best = true;
        }
        result.table.push_back(std::move(cell));
    };

    if (system == GridSystem::RelembSvm) {
        // MIXED is searched only when it differs from both pure modes
        std::vector<CorpusMode> modes;
        if (!retweets.empty()) modes.push_back(CorpusMode::Retweet);
        if (!friends.empty()) modes.push_back(CorpusMode::Friends);
        if (!retweets.empty() && !friends.empty()) modes.push_back(CorpusMode::Mixed);
        if (modes.empty())
            throw std::runtime_error("grid_search: no interaction pairs supplied");
        for (CorpusMode mode : modes) {
            InteractionSet corpus = build_corpus(retweets, friends, mode);
            for (int dim : grid.dims) {
                TrainConfig tc = emb_base;
                tc.dim = dim;
                RelationalEmbedding emb = relstance::train(corpus, tc);
                for (double C : grid.C_values) {
                    for (double gamma : grid.gamma_values) {
                        PipelineConfig pc;
                        pc.system = parse_system("relemb-svm");
                        pc.C = C;
                        pc.gamma = gamma;
                        CvCell cell;
                        cell.mode = mode;
                        cell.dim = dim;
                        cell.C = C;
                        cell.gamma = gamma;
                        cell.mean_f1 = detail::cv_mean_f1(train, folds, pc, &emb,
                                                          nullptr, cell.fold_f1);
                        consider(std::move(cell));
                    }
                }
            }
        }
    } else {
        PipelineConfig pc;
        pc.system = parse_system(system == GridSystem::TfidfSvm ? "tfidf-svm"
                                                                : "ftemb-svm");
        for (double C : grid.C_values) {
            for (double gamma : grid.gamma_values) {
                pc.C = C;
                pc.gamma = gamma;
                CvCell cell;
                cell.C = C;
                cell.gamma = gamma;
                cell.mean_f1 =
                    detail::cv_mean_f1(train, folds, pc, nullptr, wordvecs,
                                       cell.fold_f1);
                consider(std::move(cell));
            }
        }
    }
    return result;
}

inline nlohmann::json cv_table_to_json(const GridSearchResult& r) {
    auto cell_json = [](const CvCell& c) {
        nlohmann::json j = {{"C", c.C},
                            {"gamma", c.gamma},
                            {"fold_f1", c.fold_f1},
                            {"mean_f1", c.mean_f1}};
        if (c.mode) j["mode"] = to_string(*c.mode);
        if (c.dim) j["dim"] = *c.dim;
        return j;
    };
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& c : r.table) rows.push_back(cell_json(c));
    return {{"version", 1}, {"table", rows}, {"best", cell_json(r.best)}};
}

inline std::string cv_table_to_text(const GridSearchResult& r) {
    std::ostringstream out;
    out << std::left << std::setw(9) << "mode" << std::setw(6) << "dim"
        << std::setw(9) << "C" << std::setw(9) << "gamma" << std::setw(9)
        << "mean_f1" << "folds\n";
    out << std::fixed << std::setprecision(4);
    for (const auto& c : r.table) {
        out << std::setw(9) << (c.mode ? to_string(*c.mode) : "-") << std::setw(6)
            << (c.dim ? std::to_string(*c.dim) : "-") << std::setw(9) << c.C
            << std::setw(9) << c.gamma << std::setw(9) << c.mean_f1;
        for (double f : c.fold_f1) out << ' ' << f;
        out << '\n';
    }
    out << "best: mode=" << (r.best.mode ? to_string(*r.best.mode) : "-")
        << " dim=" << (r.best.dim ? std::to_string(*r.best.dim) : "-")
        << " C=" << r.best.C << " gamma=" << r.best.gamma
        << " mean_f1=" << r.best.mean_f1 << '\n';
    return out.str();
}

} // namespace relstance
