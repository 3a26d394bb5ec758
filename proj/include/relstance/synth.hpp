#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "relstance/core.hpp"
#include "relstance/rng.hpp"

namespace relstance {

struct CommunitySpec {
    Stance stance = Stance::None;
    std::size_t size = 0;
    double signal = 1.0; // P(tweet label == community stance)
};

struct SynthConfig {
    std::size_t n_users = 0;
    std::vector<CommunitySpec> communities;
    double p_in = 0.5;
    double p_out = 0.05;
    std::size_t pairs_per_user = 20;
    std::size_t tokens_per_tweet = 6;
    double text_noise = 0.5;          // P(token drawn from the shared pool)
    double unknown_user_fraction = 0.0; // share of TEST authors with no pairs
    double test_fraction = 0.25;
    std::uint64_t seed = 1;

    void validate() const {
        if (communities.empty())
            throw std::runtime_error("synth: at least one community required");
        std::size_t total = 0;
        for (const auto& c : communities) {
            total += c.size;
            if (c.signal < 0.0 || c.signal > 1.0)
                throw std::runtime_error("synth: signal must be in [0, 1]");
        }
        if (total != n_users)
            throw std::runtime_error("synth: community sizes must sum to n_users");
        if (p_in < 0.0 || p_in > 1.0 || p_out < 0.0 || p_out > 1.0)
            throw std::runtime_error("synth: edge probabilities must be in [0, 1]");
        if (p_in <= 0.0 && p_out <= 0.0)
            throw std::runtime_error("synth: p_in and p_out cannot both be 0");
        if (p_in <= 0.0)
            throw std::runtime_error("synth: p_in must be > 0");
        if (text_noise < 0.0 || text_noise > 1.0)
            throw std::runtime_error("synth: text_noise must be in [0, 1]");
        if (unknown_user_fraction < 0.0 || unknown_user_fraction > 1.0)
            throw std::runtime_error("synth: unknown_user_fraction must be in [0, 1]");
        if (test_fraction <= 0.0 || test_fraction >= 1.0)
            throw std::runtime_error("synth: test_fraction must be in (0, 1)");
        if (pairs_per_user == 0)
            throw std::runtime_error("synth: pairs_per_user must be >= 1");
        if (tokens_per_tweet == 0)
            throw std::runtime_error("synth: tokens_per_tweet must be >= 1");
        if (n_users < 2) throw std::runtime_error("synth: need at least 2 users");
    }
};

struct SynthData {
    InteractionSet retweets;
    InteractionSet friends;
    TweetDataset tweets;
};

// Fixed-degree planted-partition generator. Each interaction picks intra
// vs inter community with odds p_in : p_out, then a uniform target on the
// chosen side. Unknown test authors are excluded as both sources and
// targets, so they appear only in the tweet file.
inline SynthData generate(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);

    std::vector<std::size_t> community_of(cfg.n_users);
    std::vector<std::size_t> first_of(cfg.communities.size());
    {
        std::size_t u = 0;
        for (std::size_t c = 0; c < cfg.communities.size(); ++c) {
            first_of[c] = u;
            for (std::size_t i = 0; i < cfg.communities[c].size; ++i)
                community_of[u++] = c;
        }
    }
    auto user_id = [](std::size_t u) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "u%04zu", u);
        return std::string(buf);
    };

    // train/test split per community, then the unknown subset of test users
    std::vector<Split> split_of(cfg.n_users, Split::Train);
    std::vector<bool> unknown(cfg.n_users, false);
    for (std::size_t c = 0; c < cfg.communities.size(); ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < cfg.communities[c].size; ++i)
            members.push_back(first_of[c] + i);
        rng.shuffle(members);
        std::size_t n_test = static_cast<std::size_t>(
            static_cast<double>(members.size()) * cfg.test_fraction + 0.5);
        std::vector<std::size_t> test_users(members.begin(), members.begin() + n_test);
        for (std::size_t u : test_users) split_of[u] = Split::Test;
        std::size_t n_unknown = static_cast<std::size_t>(
            static_cast<double>(n_test) * cfg.unknown_user_fraction + 0.5);
        for (std::size_t i = 0; i < n_unknown; ++i) unknown[test_users[i]] = true;
    }

    std::vector<std::size_t> known_users;
    for (std::size_t u = 0; u < cfg.n_users; ++u)
        if (!unknown[u]) known_users.push_back(u);

    // Weighted-dyad rejection sampling: uniform candidate, accepted with
    // p_in (same community) or p_out (other). p_in == p_out therefore
    // degenerates to uniform targets with no community structure.
    auto draw_target = [&](std::size_t source) -> std::size_t {
        std::size_t c = community_of[source];
        for (int tries = 0; tries < 2000; ++tries) {
            std::size_t t = known_users[rng.uniform_index(known_users.size())];
            if (t == source) continue; // no self-loops
            double accept = community_of[t] == c ? cfg.p_in : cfg.p_out;
            if (rng.uniform() < accept) return t;
        }
        return source == known_users.front() ? known_users.back()
                                             : known_users.front();
    };

    SynthData data;
    for (std::size_t u : known_users) {
        for (std::size_t p = 0; p < cfg.pairs_per_user; ++p)
            data.retweets.add({user_id(u), user_id(draw_target(u)),
                               InteractionKind::Retweet});
        for (std::size_t p = 0; p < cfg.pairs_per_user; ++p)
            data.friends.add({user_id(u), user_id(draw_target(u)),
                              InteractionKind::Friend});
    }

    // community token pools plus a shared noise pool
    const std::size_t pool_size = 15, noise_size = 40;
    auto community_token = [&](std::size_t c, std::size_t i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "c%zuw%02zu", c, i);
        return std::string(buf);
    };
    auto noise_token = [&](std::size_t i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "noise%02zu", i);
        return std::string(buf);
    };

    std::size_t tweet_no = 0;
    for (std::size_t u = 0; u < cfg.n_users; ++u) {
        std::size_t c = community_of[u];
        const auto& spec = cfg.communities[c];
        LabeledTweet t;
        char idbuf[32];
        std::snprintf(idbuf, sizeof(idbuf), "t%05zu", tweet_no++);
        t.tweet_id = idbuf;
        t.author = user_id(u);
        t.split = split_of[u];
        if (rng.uniform() < spec.signal) {
            t.stance = spec.stance;
        } else {
            // uniform over the other two labels
            int off = 1 + static_cast<int>(rng.uniform_index(2));
            t.stance = static_cast<Stance>((static_cast<int>(spec.stance) + off) % 3);
        }
        std::string text;
        for (std::size_t w = 0; w < cfg.tokens_per_tweet; ++w) {
            if (w) text += ' ';
            if (rng.uniform() < cfg.text_noise)
                text += noise_token(rng.uniform_index(noise_size));
            else
                text += community_token(c, rng.uniform_index(pool_size));
        }
        t.text = text;
        data.tweets.add(std::move(t));
    }
    return data;
}

enum class SynthPreset : int { Clean = 0, Overlap = 1, Transversal = 2 };

inline SynthPreset preset_from_string(const std::string& s) {
    if (s == "clean") return SynthPreset::Clean;
    if (s == "overlap") return SynthPreset::Overlap;
    if (s == "transversal") return SynthPreset::Transversal;
    throw std::runtime_error("unknown preset: '" + s + "' (clean, overlap, transversal)");
}

// clean: tight homophilous communities, weakly informative text.
// overlap: communities exist but labels bleed across them.
// transversal: stance nearly orthogonal to the interaction structure.
inline SynthConfig preset_config(SynthPreset preset, std::uint64_t seed) {
    SynthConfig cfg;
    cfg.seed = seed;
    switch (preset) {
    case SynthPreset::Clean:
        cfg.n_users = 300;
        cfg.communities = {{Stance::Against, 100, 0.95},
                           {Stance::Favor, 100, 0.95},
                           {Stance::None, 100, 0.95}};
        cfg.p_in = 0.5;
        cfg.p_out = 0.05;
        cfg.pairs_per_user = 20;
        cfg.text_noise = 0.8;
        cfg.unknown_user_fraction = 0.0;
        break;
    case SynthPreset::Overlap:
        cfg.n_users = 240;
        cfg.communities = {{Stance::Against, 80, 0.8},
                           {Stance::Favor, 80, 0.8},
                           {Stance::None, 80, 0.8}};
        cfg.p_in = 0.3;
        cfg.p_out = 0.1;
        cfg.pairs_per_user = 15;
        cfg.text_noise = 0.7;
        cfg.unknown_user_fraction = 0.15;
        break;
    case SynthPreset::Transversal:
        cfg.n_users = 150;
        cfg.communities = {{Stance::Against, 50, 0.9},
                           {Stance::Favor, 50, 0.9},
                           {Stance::None, 50, 0.9}};
        cfg.p_in = 0.1;
        cfg.p_out = 0.1;
        cfg.pairs_per_user = 10;
        cfg.text_noise = 0.5;
        cfg.unknown_user_fraction = 0.1;
        break;
    }
    return cfg;
}

} // namespace relstance
