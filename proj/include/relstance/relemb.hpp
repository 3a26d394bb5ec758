#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "relstance/core.hpp"
#include "relstance/data_io.hpp"
#include "relstance/rng.hpp"

namespace relstance {

// User index over an interaction multiset. Rows are assigned in order of
// first appearance (source then target of each pair), so the index is
// deterministic for a given pair order.
class Vocab {
public:
    static Vocab build(const InteractionSet& pairs) {
        if (pairs.empty())
            throw std::runtime_error("cannot build vocab from an empty interaction set");
        Vocab v;
        for (const auto& p : pairs.pairs()) {
            std::uint32_t s = v.intern(p.source);
            std::uint32_t t = v.intern(p.target);
            v.source_freq_[s]++;
            v.target_freq_[t]++;
        }
        return v;
    }

    std::size_t size() const { return users_.size(); }

    bool contains(const std::string& user) const {
        return index_.count(user) != 0;
    }

    std::uint32_t id_of(const std::string& user) const {
        auto it = index_.find(user);
        if (it == index_.end())
            throw std::runtime_error("user not in vocab: '" + user + "'");
        return it->second;
    }

    const std::string& user_at(std::uint32_t id) const { return users_[id]; }

    std::uint64_t source_freq(std::uint32_t id) const { return source_freq_[id]; }
    std::uint64_t target_freq(std::uint32_t id) const { return target_freq_[id]; }

    std::uint64_t total_target_freq() const {
        std::uint64_t sum = 0;
        for (auto f : target_freq_) sum += f;
        return sum;
    }

private:
    std::uint32_t intern(const std::string& user) {
        auto it = index_.find(user);
        if (it != index_.end()) return it->second;
        std::uint32_t id = static_cast<std::uint32_t>(users_.size());
        index_.emplace(user, id);
        users_.push_back(user);
        source_freq_.push_back(0);
        target_freq_.push_back(0);
        return id;
    }

    std::unordered_map<std::string, std::uint32_t> index_;
    std::vector<std::string> users_;
    std::vector<std::uint64_t> source_freq_;
    std::vector<std::uint64_t> target_freq_;
};

// Unigram^alpha sampling distribution over users that occur as targets.
// Sampling is by binary search on the cumulative distribution.
class NegativeTable {
public:
    NegativeTable(const Vocab& vocab, double alpha) {
        if (alpha < 0.0 || alpha > 1.0)
            throw std::runtime_error("ns_power must be in [0, 1]");
        double total = 0.0;
        for (std::uint32_t u = 0; u < vocab.size(); ++u) {
            if (vocab.target_freq(u) == 0) continue;
            users_.push_back(u);
            double w = std::pow(static_cast<double>(vocab.target_freq(u)), alpha);
            weights_.push_back(w);
            total += w;
        }
        if (users_.empty())
            throw std::runtime_error("no users with target occurrences");
        cumulative_.resize(weights_.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            weights_[i] /= total;
            acc += weights_[i];
            cumulative_[i] = acc;
        }
        cumulative_.back() = 1.0;
    }

    // 0 for users outside the support.
    double probability(std::uint32_t user) const {
        auto it = std::lower_bound(users_.begin(), users_.end(), user);
        if (it == users_.end() || *it != user) return 0.0;
        return weights_[static_cast<std::size_t>(it - users_.begin())];
    }

    std::uint32_t sample(Rng& rng) const {
        double x = rng.uniform();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
        std::size_t i = std::min<std::size_t>(
            static_cast<std::size_t>(it - cumulative_.begin()), users_.size() - 1);
        return users_[i];
    }

    const std::vector<std::uint32_t>& support() const { return users_; }

private:
    std::vector<std::uint32_t> users_;  // ascending (vocab row order)
    std::vector<double> weights_;       // normalized probabilities
    std::vector<double> cumulative_;
};

// Frequent-target discount: keep = min(1, sqrt(t/f) + t/f) where f is the
// user's share of all target slots. Pairs are dropped during training with
// probability 1 - keep.
inline double keep_probability(std::uint32_t user, const Vocab& vocab, double t) {
    if (t <= 0.0 || t > 1.0)
        throw std::runtime_error("subsample_t must be in (0, 1]");
    double f = static_cast<double>(vocab.target_freq(user)) /
               static_cast<double>(vocab.total_target_freq());
    if (f <= 0.0) return 1.0;
    return std::min(1.0, std::sqrt(t / f) + t / f);
}

enum class SubsampleUnit : int { Target = 0, Pair = 1 };

enum class CorpusMode : int { Retweet = 0, Friends = 1, Mixed = 2 };

inline const char* to_string(CorpusMode m) {
    switch (m) {
    case CorpusMode::Retweet: return "RETWEET";
    case CorpusMode::Friends: return "FRIENDS";
    case CorpusMode::Mixed: return "MIXED";
    }
    return "?";
}

struct TrainConfig {
    int dim = 10;
    int epochs = 15;
    double initial_lr = 0.025;
    double min_lr = 1e-4;
    int negatives_k = 5;
    double subsample_t = 1e-3;
    SubsampleUnit subsample_unit = SubsampleUnit::Target;
    double ns_power = 0.75;
    std::uint64_t seed = 1;
    int threads = 1;

    void validate() const {
        if (dim < 1) throw std::runtime_error("dim must be >= 1");
        if (epochs < 1) throw std::runtime_error("epochs must be >= 1");
        if (initial_lr <= 0.0) throw std::runtime_error("initial_lr must be > 0");
        if (min_lr < 0.0 || min_lr > initial_lr)
            throw std::runtime_error("min_lr must be in [0, initial_lr]");
        if (negatives_k < 1) throw std::runtime_error("negatives_k must be >= 1");
        if (subsample_t <= 0.0 || subsample_t > 1.0)
            throw std::runtime_error("subsample_t must be in (0, 1]");
        if (ns_power < 0.0 || ns_power > 1.0)
            throw std::runtime_error("ns_power must be in [0, 1]");
        if (threads < 1) throw std::runtime_error("threads must be >= 1");
    }
};

// W (input/user vectors) and W_out (output vectors), both U x D row-major.
struct TrainerState {
    std::size_t users = 0;
    int dim = 0;
    std::uint64_t step = 0;
    std::vector<double> w_in;
    std::vector<double> w_out;

    TrainerState() = default;
    TrainerState(std::size_t users_, int dim_)
        : users(users_), dim(dim_), w_in(users_ * dim_, 0.0),
          w_out(users_ * dim_, 0.0) {}

    double* in_row(std::uint32_t u) { return w_in.data() + std::size_t(u) * dim; }
    const double* in_row(std::uint32_t u) const {
        return w_in.data() + std::size_t(u) * dim;
    }
    double* out_row(std::uint32_t u) { return w_out.data() + std::size_t(u) * dim; }
    const double* out_row(std::uint32_t u) const {
        return w_out.data() + std::size_t(u) * dim;
    }
};

namespace detail {

inline double clamped_dot(const double* a, const double* b, int dim) {
    double dot = 0.0;
    for (int j = 0; j < dim; ++j) dot += a[j] * b[j];
    return std::clamp(dot, -30.0, 30.0);
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double log_sigmoid(double x) { return -std::log1p(std::exp(-x)); }

} // namespace detail

// Loss of one (source, target) instance with the given negatives:
//   -log s(w_s . w'_t) - sum_n log s(-w_s . w'_n)
inline double sgns_pair_loss(const TrainerState& state, std::uint32_t source,
                             std::uint32_t target,
                             std::span<const std::uint32_t> negatives) {
    const double* ws = state.in_row(source);
    double loss = -detail::log_sigmoid(
        detail::clamped_dot(ws, state.out_row(target), state.dim));
    for (std::uint32_t n : negatives)
        loss -= detail::log_sigmoid(
            -detail::clamped_dot(ws, state.out_row(n), state.dim));
    return loss;
}

// One SGD step. All gradients are evaluated at the pre-update point (the
// exact analytic gradient of the pair loss); contributions to a repeated
// output row are merged before applying. Returns the pre-update loss.
inline double sgns_step(TrainerState& state, std::uint32_t source,
                        std::uint32_t target,
                        std::span<const std::uint32_t> negatives, double lr) {
    if (lr <= 0.0) throw std::runtime_error("learning rate must be > 0");
    const int dim = state.dim;
    double* ws = state.in_row(source);

    // (row, d loss / d dot) per output row, duplicates merged
    struct OutTerm {
        std::uint32_t row;
        double coef;
    };
    std::vector<OutTerm> terms;
    terms.reserve(1 + negatives.size());

    double loss = 0.0;
    {
        double dot = detail::clamped_dot(ws, state.out_row(target), dim);
        loss -= detail::log_sigmoid(dot);
        terms.push_back({target, detail::sigmoid(dot) - 1.0});
    }
    for (std::uint32_t n : negatives) {
        double dot = detail::clamped_dot(ws, state.out_row(n), dim);
        loss -= detail::log_sigmoid(-dot);
        double coef = detail::sigmoid(dot);
        bool merged = false;
        for (auto& t : terms)
            if (t.row == n) {
                t.coef += coef;
                merged = true;
                break;
            }
        if (!merged) terms.push_back({n, coef});
    }
    if (!std::isfinite(loss))
        throw std::runtime_error("non-finite loss in sgns_step; training aborted");

    std::vector<double> grad_source(dim, 0.0);
    for (const auto& t : terms) {
        const double* wo = state.out_row(t.row);
        for (int j = 0; j < dim; ++j) grad_source[j] += t.coef * wo[j];
    }
    for (const auto& t : terms) {
        double* wo = state.out_row(t.row);
        for (int j = 0; j < dim; ++j) {
            wo[j] -= lr * t.coef * ws[j];
            if (!std::isfinite(wo[j]))
                throw std::runtime_error("non-finite weight in sgns_step; training aborted");
        }
    }
    for (int j = 0; j < dim; ++j) {
        ws[j] -= lr * grad_source[j];
        if (!std::isfinite(ws[j]))
            throw std::runtime_error("non-finite weight in sgns_step; training aborted");
    }
    state.step++;
    return loss;
}

// Trained user vectors (a copy of W). Unknown users read as zero vectors.
class RelationalEmbedding {
public:
    RelationalEmbedding() = default;

    RelationalEmbedding(std::vector<std::string> users, std::vector<double> data,
                        int dim)
        : users_(std::move(users)), data_(std::move(data)), dim_(dim) {
        if (data_.size() != users_.size() * static_cast<std::size_t>(dim_))
            throw std::runtime_error("embedding matrix shape mismatch");
        for (std::uint32_t i = 0; i < users_.size(); ++i) {
            if (!index_.emplace(users_[i], i).second)
                throw std::runtime_error("duplicate user in embedding: '" +
                                         users_[i] + "'");
        }
        for (double v : data_)
            if (!std::isfinite(v))
                throw std::runtime_error("non-finite embedding value");
    }

    static RelationalEmbedding from_trainer(const Vocab& vocab,
                                            const TrainerState& state) {
        std::vector<std::string> users(vocab.size());
        for (std::uint32_t u = 0; u < vocab.size(); ++u) users[u] = vocab.user_at(u);
        return RelationalEmbedding(std::move(users), state.w_in, state.dim);
    }

    int dim() const { return dim_; }
    std::size_t size() const { return users_.size(); }
    const std::vector<std::string>& users() const { return users_; }

    bool is_known(const std::string& user) const {
        return index_.count(user) != 0;
    }

    // Stored row for known users, zero vector of length D otherwise.
    std::vector<double> lookup(const std::string& user) const {
        auto it = index_.find(user);
        if (it == index_.end()) return std::vector<double>(dim_, 0.0);
        const double* row = data_.data() + std::size_t(it->second) * dim_;
        return std::vector<double>(row, row + dim_);
    }

    const double* row(std::uint32_t i) const {
        return data_.data() + std::size_t(i) * dim_;
    }

private:
    std::vector<std::string> users_;
    std::vector<double> data_;
    int dim_ = 0;
    std::unordered_map<std::string, std::uint32_t> index_;
};

// Embedding file: first line `U D`, then `user_id v1 ... vD` per line with
// 9 significant digits.
inline void write_embedding(const RelationalEmbedding& emb, std::ostream& out) {
    out << emb.size() << ' ' << emb.dim() << '\n';
    std::string line;
    for (std::uint32_t i = 0; i < emb.size(); ++i) {
        line.clear();
        line += emb.users()[i];
        const double* row = emb.row(i);
        for (int j = 0; j < emb.dim(); ++j) {
            line += ' ';
            detail::format_value(line, row[j]);
        }
        line += '\n';
        out << line;
    }
}

inline RelationalEmbedding read_embedding(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t n_users = 0;
    int dim = 0;
    if (!detail::get_line(in, line))
        throw std::runtime_error("embedding file is empty");
    ++line_no;
    {
        std::istringstream hs(line);
        long long u = -1, d = -1;
        if (!(hs >> u >> d) || u < 0 || d < 1)
            detail::parse_fail(line_no, "expected header `U D`");
        std::string extra;
        if (hs >> extra) detail::parse_fail(line_no, "expected header `U D`");
        n_users = static_cast<std::size_t>(u);
        dim = static_cast<int>(d);
    }
    std::vector<std::string> users;
    std::vector<double> data;
    users.reserve(n_users);
    data.reserve(n_users * dim);
    while (detail::get_line(in, line)) {
        ++line_no;
        if (detail::is_comment_or_blank(line)) continue;
        std::istringstream ls(line);
        std::string user;
        ls >> user;
        if (users.size() == n_users)
            detail::parse_fail(line_no, "more rows than the header's user count");
        users.push_back(user);
        std::string tok;
        int got = 0;
        while (ls >> tok) {
            if (got == dim)
                detail::parse_fail(line_no, "row longer than declared dimension");
            data.push_back(detail::parse_double(tok, line_no, "embedding value"));
            ++got;
        }
        if (got != dim)
            detail::parse_fail(line_no, "row shorter than declared dimension");
    }
    if (users.size() != n_users)
        throw std::runtime_error("embedding header declares " +
                                 std::to_string(n_users) + " users but file has " +
                                 std::to_string(users.size()) + " rows");
    return RelationalEmbedding(std::move(users), std::move(data), dim);
}

namespace detail {

struct PairKey {
    std::uint32_t source, target;
    int kind;
    bool operator==(const PairKey&) const = default;
};

struct PairKeyHash {
    std::size_t operator()(const PairKey& k) const {
        std::uint64_t h = (std::uint64_t(k.source) << 33) ^
                          (std::uint64_t(k.target) << 2) ^ std::uint64_t(k.kind);
        h ^= h >> 33;
        h *= 0xFF51AFD7ED558CCDULL;
        h ^= h >> 33;
        return static_cast<std::size_t>(h);
    }
};

struct EncodedCorpus {
    std::vector<std::uint32_t> sources;
    std::vector<std::uint32_t> targets;
    std::vector<double> keep; // per-pair keep probability
};

inline EncodedCorpus encode_corpus(const InteractionSet& pairs, const Vocab& vocab,
                                   const TrainConfig& cfg) {
    EncodedCorpus c;
    const std::size_t n = pairs.size();
    c.sources.reserve(n);
    c.targets.reserve(n);
    c.keep.reserve(n);
    std::unordered_map<PairKey, std::uint64_t, PairKeyHash> pair_freq;
    if (cfg.subsample_unit == SubsampleUnit::Pair) {
        for (const auto& p : pairs.pairs())
            pair_freq[{vocab.id_of(p.source), vocab.id_of(p.target),
                       static_cast<int>(p.kind)}]++;
    }
    for (const auto& p : pairs.pairs()) {
        std::uint32_t s = vocab.id_of(p.source);
        std::uint32_t t = vocab.id_of(p.target);
        c.sources.push_back(s);
        c.targets.push_back(t);
        if (cfg.subsample_t >= 1.0) {
            c.keep.push_back(1.0);
        } else if (cfg.subsample_unit == SubsampleUnit::Target) {
            c.keep.push_back(keep_probability(t, vocab, cfg.subsample_t));
        } else {
            double f = static_cast<double>(
                           pair_freq[{s, t, static_cast<int>(p.kind)}]) /
                       static_cast<double>(n);
            c.keep.push_back(std::min(1.0, std::sqrt(cfg.subsample_t / f) +
                                               cfg.subsample_t / f));
        }
    }
    return c;
}

// Rejects negatives equal to the true target; gives up after 100 tries
// (the slot is then skipped).
inline std::optional<std::uint32_t> draw_negative(const NegativeTable& table,
                                                  Rng& rng, std::uint32_t target) {
    for (int tries = 0; tries < 100; ++tries) {
        std::uint32_t n = table.sample(rng);
        if (n != target) return n;
    }
    return std::nullopt;
}

inline void init_weights(TrainerState& state, Rng& rng) {
    const double bound = 0.5 / state.dim;
    for (double& v : state.w_in) v = rng.uniform(-bound, bound);
    // w_out stays zero
}

} // namespace detail

using EpochHook = std::function<void(int epoch, const TrainerState& state)>;

// Trains relational embeddings over the pair multiset. threads=1 with a
// fixed seed is bit-reproducible; threads>1 runs unsynchronized parallel
// workers over disjoint chunks of each epoch (determinism waived).
inline RelationalEmbedding train(const InteractionSet& pairs,
                                 const TrainConfig& cfg,
                                 std::ostream* progress = nullptr,
                                 const EpochHook& on_epoch = {}) {
    cfg.validate();
    Vocab vocab = Vocab::build(pairs);
    NegativeTable table(vocab, cfg.ns_power);
    detail::EncodedCorpus corpus = detail::encode_corpus(pairs, vocab, cfg);

    Rng rng(cfg.seed);
    TrainerState state(vocab.size(), cfg.dim);
    detail::init_weights(state, rng);

    const std::uint64_t total_scheduled =
        static_cast<std::uint64_t>(cfg.epochs) * corpus.sources.size();
    auto lr_at = [&](std::uint64_t scheduled_step) {
        double frac = static_cast<double>(scheduled_step) /
                      static_cast<double>(total_scheduled);
        return std::max(cfg.min_lr,
                        cfg.initial_lr + (cfg.min_lr - cfg.initial_lr) * frac);
    };

    std::vector<std::size_t> order(corpus.sources.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::uint64_t scheduled = 0;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t trained = 0;
        double last_lr = lr_at(scheduled);

        if (cfg.threads == 1) {
            std::vector<std::uint32_t> negatives;
            for (std::size_t idx : order) {
                double lr = lr_at(scheduled++);
                last_lr = lr;
                if (corpus.keep[idx] < 1.0 && rng.uniform() >= corpus.keep[idx])
                    continue;
                std::uint32_t target = corpus.targets[idx];
                negatives.clear();
                for (int k = 0; k < cfg.negatives_k; ++k)
                    if (auto n = detail::draw_negative(table, rng, target))
                        negatives.push_back(*n);
                epoch_loss +=
                    sgns_step(state, corpus.sources[idx], target, negatives, lr);
                ++trained;
            }
        } else {
            // Hogwild-style: workers update the shared matrices without
            // synchronization; benign races accepted.
            const int nw = cfg.threads;
            std::vector<std::thread> workers;
            std::vector<double> losses(nw, 0.0);
            std::vector<std::size_t> counts(nw, 0);
            std::vector<Rng> worker_rngs;
            for (int w = 0; w < nw; ++w) worker_rngs.push_back(rng.fork(w));
            const std::size_t chunk = (order.size() + nw - 1) / nw;
            std::uint64_t epoch_base = scheduled;
            for (int w = 0; w < nw; ++w) {
                workers.emplace_back([&, w]() {
                    Rng local = worker_rngs[w];
                    std::vector<std::uint32_t> negatives;
                    std::size_t lo = std::min(order.size(), w * chunk);
                    std::size_t hi = std::min(order.size(), lo + chunk);
                    for (std::size_t i = lo; i < hi; ++i) {
                        std::size_t idx = order[i];
                        double lr = lr_at(epoch_base + i);
                        if (corpus.keep[idx] < 1.0 &&
                            local.uniform() >= corpus.keep[idx])
                            continue;
                        std::uint32_t target = corpus.targets[idx];
                        negatives.clear();
                        for (int k = 0; k < cfg.negatives_k; ++k)
                            if (auto n = detail::draw_negative(table, local, target))
                                negatives.push_back(*n);
                        losses[w] += sgns_step(state, corpus.sources[idx], target,
                                               negatives, lr);
                        counts[w]++;
                    }
                });
            }
            for (auto& t : workers) t.join();
            scheduled += order.size();
            for (int w = 0; w < nw; ++w) {
                epoch_loss += losses[w];
                trained += counts[w];
            }
            last_lr = lr_at(scheduled > 0 ? scheduled - 1 : 0);
        }

        if (progress) {
            if (trained == 0)
                *progress << "epoch " << epoch << "/" << cfg.epochs
                          << " warning: all pairs dropped by subsampling\n";
            else
                *progress << "epoch " << epoch << "/" << cfg.epochs << " loss "
                          << epoch_loss / static_cast<double>(trained) << " lr "
                          << last_lr << "\n";
        }
        if (on_epoch) on_epoch(epoch, state);
    }

    return RelationalEmbedding::from_trainer(vocab, state);
}

// Mean pair loss over the whole multiset with fresh negatives from a
// stream seeded off cfg.seed; no subsampling. Monitoring only.
inline double mean_loss(const TrainerState& state, const Vocab& vocab,
                        const InteractionSet& pairs, const TrainConfig& cfg) {
    if (pairs.empty())
        throw std::runtime_error("mean_loss of an empty pair list");
    NegativeTable table(vocab, cfg.ns_power);
    Rng rng = Rng(cfg.seed).fork(0x6C6F7373); // independent stream
    double total = 0.0;
    std::vector<std::uint32_t> negatives;
    for (const auto& p : pairs.pairs()) {
        std::uint32_t target = vocab.id_of(p.target);
        negatives.clear();
        for (int k = 0; k < cfg.negatives_k; ++k)
            if (auto n = detail::draw_negative(table, rng, target))
                negatives.push_back(*n);
        total += sgns_pair_loss(state, vocab.id_of(p.source), target, negatives);
    }
    return total / static_cast<double>(pairs.size());
}

// RETWEET / FRIENDS select one source; MIXED is the multiset union
// (retweets first, duplicates preserved).
inline InteractionSet build_corpus(const InteractionSet& retweets,
                                   const InteractionSet& friends,
                                   CorpusMode mode) {
    InteractionSet out;
    if (mode == CorpusMode::Retweet || mode == CorpusMode::Mixed)
        for (const auto& p : retweets.pairs()) out.add(p);
    if (mode == CorpusMode::Friends || mode == CorpusMode::Mixed)
        for (const auto& p : friends.pairs()) out.add(p);
    if (out.empty())
        throw std::runtime_error(std::string("no interaction pairs for mode ") +
                                 to_string(mode));
    return out;
}

} // namespace relstance
