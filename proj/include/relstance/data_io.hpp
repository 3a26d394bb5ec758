#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "relstance/core.hpp"

namespace relstance {

namespace detail {

inline bool is_comment_or_blank(const std::string& line) {
    return line.empty() || line[0] == '#';
}

inline std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            cols.push_back(line.substr(start));
            break;
        }
        cols.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return cols;
}

// Reads a line and drops a trailing '\r' so CRLF inputs parse the same.
inline bool get_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

[[noreturn]] inline void parse_fail(std::size_t line_no, const std::string& what) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": " + what);
}

// Tweet texts are stored one record per line; literal tabs and newlines
// inside the text column are escaped as \t and \n.
inline std::string escape_text(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '\t': out += "\\t"; break;
        case '\n': out += "\\n"; break;
        case '\\': out += "\\\\"; break;
        default: out += c;
        }
    }
    return out;
}

inline std::string unescape_text(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            char n = s[i + 1];
            if (n == 't') { out += '\t'; ++i; continue; }
            if (n == 'n') { out += '\n'; ++i; continue; }
            if (n == '\\') { out += '\\'; ++i; continue; }
        }
        out += s[i];
    }
    return out;
}

inline double parse_double(const std::string& tok, std::size_t line_no,
                           const char* what) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        parse_fail(line_no, std::string("non-numeric ") + what + " '" + tok + "'");
    }
    if (pos != tok.size())
        parse_fail(line_no, std::string("non-numeric ") + what + " '" + tok + "'");
    return v;
}

// 9 significant digits; enough for a 1e-8 componentwise round-trip.
inline void format_value(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    out += buf;
}

} // namespace detail

// Edge file: `source<TAB>target[<TAB>kind]`, kind in {RETWEET, FRIEND}.
// Lines starting with '#' and blank lines are ignored.
inline InteractionSet parse_edges(std::istream& in, InteractionKind kind_default) {
    InteractionSet set;
    std::string line;
    std::size_t line_no = 0;
    while (detail::get_line(in, line)) {
        ++line_no;
        if (detail::is_comment_or_blank(line)) continue;
        auto cols = detail::split_tabs(line);
        if (cols.size() != 2 && cols.size() != 3)
            detail::parse_fail(line_no, "expected 2 or 3 tab-separated columns, got " +
                                            std::to_string(cols.size()));
        if (cols[0].empty() || cols[1].empty())
            detail::parse_fail(line_no, "empty user id");
        InteractionKind kind = kind_default;
        if (cols.size() == 3) {
            try {
                kind = kind_from_string(cols[2]);
            } catch (const std::exception& e) {
                detail::parse_fail(line_no, e.what());
            }
        }
        set.add({cols[0], cols[1], kind});
    }
    return set;
}

// Always writes the kind column, so parsing back with any default kind
// reproduces the set exactly.
inline void serialize_edges(const InteractionSet& set, std::ostream& out) {
    for (const auto& p : set.pairs())
        out << p.source << '\t' << p.target << '\t' << to_string(p.kind) << '\n';
}

inline const char* kTweetHeader = "id\tuser\ttext\tlabel\tsplit";

inline TweetDataset parse_tweets(std::istream& in) {
    TweetDataset ds;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (detail::get_line(in, line)) {
        ++line_no;
        if (detail::is_comment_or_blank(line)) continue;
        if (!saw_header) {
            if (line != kTweetHeader)
                detail::parse_fail(line_no, "expected header '" +
                                                std::string(kTweetHeader) + "'");
            saw_header = true;
            continue;
        }
        auto cols = detail::split_tabs(line);
        if (cols.size() != 5)
            detail::parse_fail(line_no, "expected 5 tab-separated columns, got " +
                                            std::to_string(cols.size()));
        if (cols[0].empty() || cols[1].empty())
            detail::parse_fail(line_no, "empty id field");
        LabeledTweet t;
        t.tweet_id = cols[0];
        t.author = cols[1];
        t.text = detail::unescape_text(cols[2]);
        try {
            t.stance = stance_from_string(cols[3]);
            t.split = split_from_string(cols[4]);
        } catch (const std::exception& e) {
            detail::parse_fail(line_no, e.what());
        }
        ds.add(std::move(t)); // throws on duplicate id, naming it
    }
    if (!saw_header && ds.size() == 0 && line_no > 0)
        throw std::runtime_error("tweet file has no header line");
    return ds;
}

inline void serialize_tweets(const TweetDataset& ds, std::ostream& out) {
    out << kTweetHeader << '\n';
    for (const auto& r : ds.records())
        out << r.tweet_id << '\t' << r.author << '\t'
            << detail::escape_text(r.text) << '\t' << to_string(r.stance) << '\t'
            << to_string(r.split) << '\n';
}

// Standard textual word-vector layout: optional `<count> <dim>` header,
// then `word v1 ... vdim` per line. Later duplicates overwrite earlier ones.
inline WordVectorTable load_word_vectors(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t dim = 0;
    WordVectorTable table;
    bool first_content = true;
    while (detail::get_line(in, line)) {
        ++line_no;
        if (detail::is_comment_or_blank(line)) continue;
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string tok;
        while (ls >> tok) toks.push_back(tok);
        if (toks.empty()) continue;
        if (first_content) {
            first_content = false;
            if (toks.size() == 2 && toks[0].find_first_not_of("0123456789") ==
                                        std::string::npos &&
                toks[1].find_first_not_of("0123456789") == std::string::npos) {
                dim = std::stoul(toks[1]);
                if (dim == 0) detail::parse_fail(line_no, "header declares dim 0");
                table = WordVectorTable(dim);
                continue;
            }
        }
        if (toks.size() < 2)
            detail::parse_fail(line_no, "expected `word v1 ... vdim`");
        const std::string& word = toks[0];
        if (dim == 0) {
            dim = toks.size() - 1;
            table = WordVectorTable(dim);
        } else if (toks.size() - 1 != dim) {
            detail::parse_fail(line_no, "dimension mismatch for word '" + word +
                                            "': expected " + std::to_string(dim) +
                                            ", got " + std::to_string(toks.size() - 1));
        }
        std::vector<double> vec(dim);
        for (std::size_t i = 0; i < dim; ++i)
            vec[i] = detail::parse_double(toks[i + 1], line_no, "vector component");
        table.put(word, std::move(vec));
    }
    return table;
}

} // namespace relstance
