#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "relstance/core.hpp"

namespace relstance {

namespace detail {

// Minimal UTF-8 walk; malformed bytes are treated as opaque 1-byte runs.
inline std::uint32_t decode_utf8(const std::string& s, std::size_t& i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    std::uint32_t cp = c;
    std::size_t extra = 0;
    if (c >= 0xF0) { cp = c & 0x07; extra = 3; }
    else if (c >= 0xE0) { cp = c & 0x0F; extra = 2; }
    else if (c >= 0xC0) { cp = c & 0x1F; extra = 1; }
    if (extra > 0 && i + extra >= s.size()) { // truncated sequence
        ++i;
        return c;
    }
    for (std::size_t k = 1; k <= extra; ++k) {
        unsigned char cc = static_cast<unsigned char>(s[i + k]);
        if ((cc & 0xC0) != 0x80) { ++i; return c; }
        cp = (cp << 6) | (cc & 0x3F);
    }
    i += extra + 1;
    return cp;
}

inline bool is_unicode_space(std::uint32_t cp) {
    switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
        return true;
    default:
        return cp >= 0x2000 && cp <= 0x200A;
    }
}

inline bool is_ascii_punct(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return u < 0x80 && std::ispunct(u);
}

inline bool starts_with(const std::string& s, const char* prefix) {
    return s.rfind(prefix, 0) == 0;
}

} // namespace detail

// Lowercases (ASCII), splits on Unicode whitespace, collapses URLs to
// `<url>`, strips surrounding ASCII punctuation while keeping # and @
// prefixes. Non-ASCII letters pass through unchanged.
inline std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string raw;
    std::size_t i = 0;
    auto flush = [&]() {
        if (raw.empty()) return;
        std::string tok;
        tok.reserve(raw.size());
        for (char c : raw)
            tok += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
        raw.clear();
        std::size_t b = 0;
        while (b < tok.size() && detail::is_ascii_punct(tok[b]) && tok[b] != '#' &&
               tok[b] != '@')
            ++b;
        tok.erase(0, b);
        if (detail::starts_with(tok, "http://") ||
            detail::starts_with(tok, "https://")) {
            tokens.push_back("<url>");
            return;
        }
        std::size_t e = tok.size();
        while (e > 0 && detail::is_ascii_punct(tok[e - 1])) --e;
        tok.erase(e);
        if (!tok.empty()) tokens.push_back(std::move(tok));
    };
    while (i < text.size()) {
        std::size_t at = i;
        std::uint32_t cp = detail::decode_utf8(text, i);
        if (detail::is_unicode_space(cp))
            flush();
        else
            raw.append(text, at, i - at);
    }
    flush();
    return tokens;
}

// Sorted sparse vector; indices strictly increasing, no explicit zeros.
struct SparseVector {
    std::size_t dim = 0;
    std::vector<std::pair<std::uint32_t, double>> entries;

    double l2_norm() const {
        double s = 0.0;
        for (const auto& [i, v] : entries) s += v * v;
        return std::sqrt(s);
    }

    std::vector<double> to_dense() const {
        std::vector<double> d(dim, 0.0);
        for (const auto& [i, v] : entries) d[i] = v;
        return d;
    }
};

class TfIdfModel {
public:
    TfIdfModel() = default;

    // idf(t) = ln((1+N)/(1+df(t))) + 1. With max_features set, keeps the
    // top tokens by total corpus count, ties broken lexicographically;
    // retained tokens are indexed in lexicographic order.
    static TfIdfModel fit(const std::vector<std::vector<std::string>>& corpus,
                          std::optional<std::size_t> max_features = std::nullopt) {
        if (corpus.empty())
            throw std::runtime_error("cannot fit tf-idf on an empty corpus");
        std::unordered_map<std::string, std::uint64_t> df, tf;
        std::unordered_map<std::string, bool> seen;
        for (const auto& doc : corpus) {
            seen.clear();
            for (const auto& tok : doc) {
                tf[tok]++;
                if (seen.emplace(tok, true).second) df[tok]++;
            }
        }
        std::vector<std::string> kept;
        kept.reserve(tf.size());
        for (const auto& [tok, n] : tf) kept.push_back(tok);
        if (max_features && *max_features < kept.size()) {
            std::sort(kept.begin(), kept.end(),
                      [&](const std::string& a, const std::string& b) {
                          if (tf[a] != tf[b]) return tf[a] > tf[b];
                          return a < b;
                      });
            kept.resize(*max_features);
        }
        std::sort(kept.begin(), kept.end());

        TfIdfModel m;
        m.n_docs_ = corpus.size();
        m.max_features_ = max_features;
        m.idf_.reserve(kept.size());
        const double n = static_cast<double>(corpus.size());
        for (std::uint32_t idx = 0; idx < kept.size(); ++idx) {
            m.vocabulary_.emplace(kept[idx], idx);
            m.idf_.push_back(
                std::log((1.0 + n) / (1.0 + static_cast<double>(df[kept[idx]]))) +
                1.0);
        }
        return m;
    }

    // raw count * idf, L2-normalized. Unknown tokens are ignored; a
    // document of only unknown tokens maps to the zero vector.
    SparseVector transform(const std::vector<std::string>& tokens) const {
        std::map<std::uint32_t, double> counts;
        for (const auto& tok : tokens) {
            auto it = vocabulary_.find(tok);
            if (it != vocabulary_.end()) counts[it->second] += 1.0;
        }
        SparseVector v;
        v.dim = vocabulary_.size();
        v.entries.reserve(counts.size());
        double sq = 0.0;
        for (const auto& [idx, cnt] : counts) {
            double val = cnt * idf_[idx];
            v.entries.emplace_back(idx, val);
            sq += val * val;
        }
        if (sq > 0.0) {
            double norm = std::sqrt(sq);
            for (auto& [idx, val] : v.entries) val /= norm;
        }
        return v;
    }

    std::size_t vocab_size() const { return vocabulary_.size(); }
    std::size_t n_docs() const { return n_docs_; }

    double idf_of(const std::string& tok) const {
        auto it = vocabulary_.find(tok);
        if (it == vocabulary_.end())
            throw std::runtime_error("token not in tf-idf vocabulary: '" + tok + "'");
        return idf_[it->second];
    }

    bool has_token(const std::string& tok) const {
        return vocabulary_.count(tok) != 0;
    }

    nlohmann::json to_json() const {
        nlohmann::json vocab = nlohmann::json::object();
        for (const auto& [tok, idx] : vocabulary_) vocab[tok] = idx;
        return {{"version", 1},
                {"type", "tfidf"},
                {"vocabulary", vocab},
                {"idf", idf_},
                {"n_docs", n_docs_}};
    }

    static TfIdfModel from_json(const nlohmann::json& j) {
        if (!j.contains("version"))
            throw std::runtime_error("tf-idf model json is missing 'version'");
        TfIdfModel m;
        m.n_docs_ = j.at("n_docs").get<std::size_t>();
        m.idf_ = j.at("idf").get<std::vector<double>>();
        for (const auto& [tok, idx] : j.at("vocabulary").items())
            m.vocabulary_.emplace(tok, idx.get<std::uint32_t>());
        if (m.vocabulary_.size() != m.idf_.size())
            throw std::runtime_error("tf-idf model json: vocabulary/idf size mismatch");
        return m;
    }

private:
    std::unordered_map<std::string, std::uint32_t> vocabulary_;
    std::vector<double> idf_;
    std::size_t n_docs_ = 0;
    std::optional<std::size_t> max_features_;
};

struct AvgVecResult {
    std::vector<double> mean;
    std::size_t hits = 0;
};

// Arithmetic mean of the in-vocabulary token vectors; zero vector when
// nothing is found. OOV tokens are skipped.
inline AvgVecResult avg_word_vectors(const std::vector<std::string>& tokens,
                                     const WordVectorTable& table) {
    AvgVecResult r;
    r.mean.assign(table.dim(), 0.0);
    for (const auto& tok : tokens) {
        if (const auto* vec = table.find(tok)) {
            for (std::size_t j = 0; j < table.dim(); ++j) r.mean[j] += (*vec)[j];
            r.hits++;
        }
    }
    if (r.hits > 0)
        for (auto& v : r.mean) v /= static_cast<double>(r.hits);
    return r;
}

} // namespace relstance
