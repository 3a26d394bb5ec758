#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "relstance/core.hpp"
#include "relstance/rng.hpp"

namespace relstance {

// 3x3 counts indexed (gold, predicted) in the fixed stance order.
class ConfusionMatrix {
public:
    ConfusionMatrix() { counts_ = {}; }

    static ConfusionMatrix from_labels(const std::vector<Stance>& gold,
                                       const std::vector<Stance>& pred) {
        if (gold.size() != pred.size())
            throw std::runtime_error("confusion matrix: gold/pred length mismatch");
        ConfusionMatrix m;
        for (std::size_t i = 0; i < gold.size(); ++i)
            m.counts_[static_cast<int>(gold[i])][static_cast<int>(pred[i])]++;
        return m;
    }

    std::size_t at(Stance gold, Stance pred) const {
        return counts_[static_cast<int>(gold)][static_cast<int>(pred)];
    }

    std::size_t total() const {
        std::size_t t = 0;
        for (const auto& row : counts_)
            for (auto c : row) t += c;
        return t;
    }

    void write_tsv(std::ostream& out) const {
        out << "gold\\pred";
        for (Stance c : kAllStances) out << '\t' << to_string(c);
        out << '\n';
        for (Stance g : kAllStances) {
            out << to_string(g);
            for (Stance p : kAllStances) out << '\t' << at(g, p);
            out << '\n';
        }
    }

private:
    std::array<std::array<std::size_t, 3>, 3> counts_;
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct EvalReport {
    double f1_against = 0.0;
    double f1_favor = 0.0;
    double f1_avg = 0.0; // (f1_against + f1_favor) / 2, NONE excluded
    std::array<ClassMetrics, 3> per_class;
    std::size_t n = 0;
};

// Averaged F1 over AGAINST and FAVOR; 0/0 ratios are taken as 0. NONE is
// scored per class but excluded from the average.
inline EvalReport f1_favor_against(const std::vector<Stance>& gold,
                                   const std::vector<Stance>& pred) {
    if (gold.size() != pred.size())
        throw std::runtime_error("f1_favor_against: gold/pred length mismatch");
    std::array<std::size_t, 3> tp{}, fp{}, fn{};
    for (std::size_t i = 0; i < gold.size(); ++i) {
        int g = static_cast<int>(gold[i]);
        int p = static_cast<int>(pred[i]);
        if (g == p) {
            tp[g]++;
        } else {
            fn[g]++;
            fp[p]++;
        }
    }
    EvalReport r;
    r.n = gold.size();
    for (int c = 0; c < 3; ++c) {
        auto& m = r.per_class[c];
        m.precision = (tp[c] + fp[c]) ? static_cast<double>(tp[c]) /
                                            static_cast<double>(tp[c] + fp[c])
                                      : 0.0;
        m.recall = (tp[c] + fn[c]) ? static_cast<double>(tp[c]) /
                                         static_cast<double>(tp[c] + fn[c])
                                   : 0.0;
        m.f1 = (m.precision + m.recall) > 0.0
                   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
    }
    r.f1_against = r.per_class[static_cast<int>(Stance::Against)].f1;
    r.f1_favor = r.per_class[static_cast<int>(Stance::Favor)].f1;
    r.f1_avg = (r.f1_against + r.f1_favor) / 2.0;
    return r;
}

inline nlohmann::json report_to_json(const EvalReport& r) {
    nlohmann::json per = nlohmann::json::object();
    for (Stance c : kAllStances) {
        const auto& m = r.per_class[static_cast<int>(c)];
        per[to_string(c)] = {
            {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
    }
    return {{"version", 1},
            {"n", r.n},
            {"f1_against", r.f1_against},
            {"f1_favor", r.f1_favor},
            {"f1_avg", r.f1_avg},
            {"per_class", per}};
}

inline std::string report_to_text(const EvalReport& r) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4);
    out << "class      precision  recall     f1\n";
    for (Stance c : kAllStances) {
        const auto& m = r.per_class[static_cast<int>(c)];
        out << std::left << std::setw(11) << to_string(c) << std::setw(11)
            << m.precision << std::setw(11) << m.recall << std::setw(11) << m.f1
            << '\n';
    }
    out << "f1_avg (AGAINST, FAVOR): " << r.f1_avg << "  (n=" << r.n << ")\n";
    return out.str();
}

enum class KfoldMode : int { ByTweet = 0, ByUser = 1 };

struct Fold {
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> val_indices;
};

// BY_TWEET: label-stratified round-robin over shuffled records.
// BY_USER: partitions authors, so no author crosses a fold boundary.
inline std::vector<Fold> kfold_split(const TweetDataset& dataset, std::size_t k,
                                     std::uint64_t seed, KfoldMode mode) {
    const auto& recs = dataset.records();
    if (k < 2) throw std::runtime_error("kfold: k must be >= 2");
    std::vector<std::vector<std::size_t>> val_of(k);
    Rng rng(seed);

    if (mode == KfoldMode::ByTweet) {
        if (k > recs.size())
            throw std::runtime_error("kfold: k larger than the number of tweets");
        std::array<std::vector<std::size_t>, 3> by_label;
        for (std::size_t i = 0; i < recs.size(); ++i)
            by_label[static_cast<int>(recs[i].stance)].push_back(i);
        std::size_t cursor = 0;
        for (auto& group : by_label) {
            rng.shuffle(group);
            for (std::size_t idx : group) val_of[cursor++ % k].push_back(idx);
        }
    } else {
        std::vector<std::string> users;
        std::unordered_map<std::string, std::vector<std::size_t>> tweets_of;
        for (std::size_t i = 0; i < recs.size(); ++i) {
            auto [it, fresh] = tweets_of.try_emplace(recs[i].author);
            if (fresh) users.push_back(recs[i].author);
            it->second.push_back(i);
        }
        if (k > users.size())
            throw std::runtime_error("kfold: k larger than the number of users");
        rng.shuffle(users);
        for (std::size_t u = 0; u < users.size(); ++u)
            for (std::size_t idx : tweets_of[users[u]])
                val_of[u % k].push_back(idx);
    }

    std::vector<Fold> folds(k);
    for (std::size_t f = 0; f < k; ++f) {
        std::sort(val_of[f].begin(), val_of[f].end());
        folds[f].val_indices = val_of[f];
        for (std::size_t g = 0; g < k; ++g) {
            if (g == f) continue;
            folds[f].train_indices.insert(folds[f].train_indices.end(),
                                          val_of[g].begin(), val_of[g].end());
        }
        std::sort(folds[f].train_indices.begin(), folds[f].train_indices.end());
    }
    return folds;
}

} // namespace relstance
