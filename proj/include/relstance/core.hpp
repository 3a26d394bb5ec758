#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace relstance {

// Fixed class order: AGAINST < FAVOR < NONE. All argmax tie-breaks and
// report layouts rely on these indices.
enum class Stance : int { Against = 0, Favor = 1, None = 2 };

inline constexpr std::array<Stance, 3> kAllStances = {
    Stance::Against, Stance::Favor, Stance::None};

inline const char* to_string(Stance s) {
    switch (s) {
    case Stance::Against: return "AGAINST";
    case Stance::Favor: return "FAVOR";
    case Stance::None: return "NONE";
    }
    return "?";
}

inline Stance stance_from_string(const std::string& s) {
    if (s == "AGAINST") return Stance::Against;
    if (s == "FAVOR") return Stance::Favor;
    // NEUTRAL is accepted as an alias and normalized to NONE.
    if (s == "NONE" || s == "NEUTRAL") return Stance::None;
    throw std::runtime_error("unknown stance label: '" + s + "'");
}

enum class Split : int { Train = 0, Test = 1 };

inline const char* to_string(Split s) {
    return s == Split::Train ? "TRAIN" : "TEST";
}

inline Split split_from_string(const std::string& s) {
    if (s == "TRAIN") return Split::Train;
    if (s == "TEST") return Split::Test;
    throw std::runtime_error("unknown split: '" + s + "'");
}

enum class InteractionKind : int { Retweet = 0, Friend = 1 };

inline const char* to_string(InteractionKind k) {
    return k == InteractionKind::Retweet ? "RETWEET" : "FRIEND";
}

inline InteractionKind kind_from_string(const std::string& s) {
    if (s == "RETWEET") return InteractionKind::Retweet;
    if (s == "FRIEND") return InteractionKind::Friend;
    throw std::runtime_error("unknown interaction kind: '" + s + "'");
}

// One directed social action: source acts (retweets/follows), target receives.
struct InteractionPair {
    std::string source;
    std::string target;
    InteractionKind kind = InteractionKind::Retweet;

    bool operator==(const InteractionPair&) const = default;
};

// Ordered multiset of interaction pairs. Duplicates are kept: frequency
// carries signal and every occurrence is a training instance.
class InteractionSet {
public:
    void add(InteractionPair p) {
        if (p.source.empty() || p.target.empty())
            throw std::runtime_error("interaction pair with empty user id");
        counts_[static_cast<int>(p.kind)]++;
        pairs_.push_back(std::move(p));
    }

    const std::vector<InteractionPair>& pairs() const { return pairs_; }
    std::size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }
    std::size_t count(InteractionKind k) const {
        return counts_[static_cast<int>(k)];
    }

private:
    std::vector<InteractionPair> pairs_;
    std::array<std::size_t, 2> counts_ = {0, 0};
};

struct LabeledTweet {
    std::string tweet_id;
    std::string author;
    std::string text;
    Stance stance = Stance::None;
    Split split = Split::Train;
};

// counts[split][stance]
using LabelHistogram = std::array<std::array<std::size_t, 3>, 2>;

class TweetDataset {
public:
    void add(LabeledTweet t) {
        if (!ids_.insert(t.tweet_id).second)
            throw std::runtime_error("duplicate tweet id: '" + t.tweet_id + "'");
        records_.push_back(std::move(t));
    }

    const std::vector<LabeledTweet>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }

    LabelHistogram label_histogram() const {
        LabelHistogram h{};
        for (const auto& r : records_)
            h[static_cast<int>(r.split)][static_cast<int>(r.stance)]++;
        return h;
    }

    std::size_t count(Split s) const {
        std::size_t n = 0;
        for (const auto& r : records_)
            if (r.split == s) n++;
        return n;
    }

private:
    std::vector<LabeledTweet> records_;
    std::unordered_set<std::string> ids_;
};

// Pretrained word vectors, loaded from the standard textual layout.
class WordVectorTable {
public:
    WordVectorTable() = default;
    explicit WordVectorTable(std::size_t dim) : dim_(dim) {
        if (dim == 0) throw std::runtime_error("word vector dim must be > 0");
    }

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return entries_.size(); }

    void put(const std::string& word, std::vector<double> vec) {
        if (vec.size() != dim_)
            throw std::runtime_error("word vector dimension mismatch for '" +
                                     word + "'");
        entries_[word] = std::move(vec);
    }

    const std::vector<double>* find(const std::string& word) const {
        auto it = entries_.find(word);
        return it == entries_.end() ? nullptr : &it->second;
    }

private:
    std::size_t dim_ = 0;
    std::unordered_map<std::string, std::vector<double>> entries_;
};

// Route that produced a prediction. Pure textual systems report
// TextualBackoff as well, so a back-off run over a dataset with no known
// users is byte-identical to the textual system's output.
enum class PredictionSource : int { Relational = 0, TextualBackoff = 1, Ensemble = 2 };

inline const char* to_string(PredictionSource s) {
    switch (s) {
    case PredictionSource::Relational: return "RELATIONAL";
    case PredictionSource::TextualBackoff: return "TEXTUAL-BACKOFF";
    case PredictionSource::Ensemble: return "ENSEMBLE";
    }
    return "?";
}

struct Prediction {
    Stance label = Stance::None;
    PredictionSource source = PredictionSource::Ensemble;
    // Indexed by Stance; classes that cannot be predicted hold -inf.
    std::array<double, 3> scores = {0.0, 0.0, 0.0};
};

// Argmax over scores with the fixed tie-break AGAINST < FAVOR < NONE.
inline Stance argmax_stance(const std::array<double, 3>& scores) {
    int best = 0;
    for (int c = 1; c < 3; ++c)
        if (scores[c] > scores[best]) best = c;
    return static_cast<Stance>(best);
}

} // namespace relstance
