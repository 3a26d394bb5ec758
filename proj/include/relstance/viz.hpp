#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "relstance/core.hpp"

namespace relstance {

struct PcaModel {
    std::vector<double> mean;                 // D
    std::vector<std::vector<double>> components; // k rows, orthonormal
    std::vector<double> explained_variance;   // descending
};

namespace detail {

inline double vec_dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
    return s;
}

inline double vec_norm(const std::vector<double>& a) {
    return std::sqrt(vec_dot(a, a));
}

// v - sum_i <v, basis_i> basis_i
inline void orthogonalize(std::vector<double>& v,
                          const std::vector<std::vector<double>>& basis) {
    for (const auto& b : basis) {
        double proj = vec_dot(v, b);
        for (std::size_t j = 0; j < v.size(); ++j) v[j] -= proj * b[j];
    }
}

} // namespace detail

// Mean-centered covariance PCA via deflated power iteration (tolerance
// 1e-10, 10000-iteration cap). Each component's largest-magnitude entry is
// made positive so results are sign-stable.
inline PcaModel pca_fit(const std::vector<std::vector<double>>& X, std::size_t k = 2) {
    const std::size_t n = X.size();
    if (n < 2) throw std::runtime_error("pca_fit: need at least 2 rows");
    const std::size_t dim = X[0].size();
    if (dim < k) throw std::runtime_error("pca_fit: D must be >= k");
    for (const auto& row : X)
        if (row.size() != dim)
            throw std::runtime_error("pca_fit: ragged input matrix");

    PcaModel model;
    model.mean.assign(dim, 0.0);
    for (const auto& row : X)
        for (std::size_t j = 0; j < dim; ++j) model.mean[j] += row[j];
    for (auto& m : model.mean) m /= static_cast<double>(n);

    // cov = sum (x - mean)(x - mean)^T / (n - 1)
    std::vector<std::vector<double>> cov(dim, std::vector<double>(dim, 0.0));
    std::vector<double> centered(dim);
    for (const auto& row : X) {
        for (std::size_t j = 0; j < dim; ++j) centered[j] = row[j] - model.mean[j];
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = a; b < dim; ++b)
                cov[a][b] += centered[a] * centered[b];
    }
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = a; b < dim; ++b) {
            cov[a][b] /= static_cast<double>(n - 1);
            cov[b][a] = cov[a][b];
        }

    constexpr double kTol = 1e-10;
    constexpr int kMaxIter = 10000;

    auto mat_vec = [&](const std::vector<double>& v) {
        std::vector<double> out(dim, 0.0);
        for (std::size_t a = 0; a < dim; ++a)
            out[a] = detail::vec_dot(cov[a], v);
        return out;
    };

    for (std::size_t comp = 0; comp < k; ++comp) {
        // deterministic start: normalized ones, falling back to basis
        // vectors if that is (numerically) inside the found subspace
        std::vector<double> v;
        for (std::size_t cand = 0; cand <= dim; ++cand) {
            std::vector<double> start(dim, 0.0);
            if (cand == 0)
                start.assign(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
            else
                start[cand - 1] = 1.0;
            detail::orthogonalize(start, model.components);
            if (detail::vec_norm(start) > 1e-8) {
                double nn = detail::vec_norm(start);
                for (auto& x : start) x /= nn;
                v = std::move(start);
                break;
            }
        }
        if (v.empty())
            throw std::runtime_error("pca_fit: could not seed power iteration");

        double lambda = 0.0;
        for (int it = 0; it < kMaxIter; ++it) {
            std::vector<double> w = mat_vec(v);
            detail::orthogonalize(w, model.components); // deflation
            double norm = detail::vec_norm(w);
            if (norm < 1e-14) {
                lambda = 0.0; // residual space has (numerically) zero variance
                break;
            }
            for (auto& x : w) x /= norm;
            double diff = 0.0;
            for (std::size_t j = 0; j < dim; ++j)
                diff = std::max(diff, std::abs(w[j] - v[j]));
            v = std::move(w);
            lambda = norm;
            if (diff < kTol) break;
        }
        // Rayleigh quotient; exact for converged v, 0 for dead directions
        std::vector<double> cv = mat_vec(v);
        detail::orthogonalize(cv, model.components);
        lambda = detail::vec_dot(v, cv);

        // sign convention: largest-magnitude entry positive
        std::size_t arg = 0;
        for (std::size_t j = 1; j < dim; ++j)
            if (std::abs(v[j]) > std::abs(v[arg])) arg = j;
        if (v[arg] < 0.0)
            for (auto& x : v) x = -x;

        model.components.push_back(std::move(v));
        model.explained_variance.push_back(std::max(0.0, lambda));
    }
    // keep variances descending even when eigenvalues are nearly equal
    for (std::size_t a = 0; a + 1 < model.explained_variance.size(); ++a)
        for (std::size_t b = a + 1; b < model.explained_variance.size(); ++b)
            if (model.explained_variance[b] > model.explained_variance[a]) {
                std::swap(model.explained_variance[a], model.explained_variance[b]);
                std::swap(model.components[a], model.components[b]);
            }
    return model;
}

inline std::vector<std::vector<double>> pca_transform(
    const PcaModel& model, const std::vector<std::vector<double>>& X) {
    std::vector<std::vector<double>> out;
    out.reserve(X.size());
    std::vector<double> centered(model.mean.size());
    for (const auto& row : X) {
        for (std::size_t j = 0; j < row.size(); ++j)
            centered[j] = row[j] - model.mean[j];
        std::vector<double> proj(model.components.size());
        for (std::size_t c = 0; c < model.components.size(); ++c)
            proj[c] = detail::vec_dot(centered, model.components[c]);
        out.push_back(std::move(proj));
    }
    return out;
}

inline std::vector<double> pca_reconstruct(const PcaModel& model,
                                           const std::vector<double>& proj) {
    std::vector<double> x = model.mean;
    for (std::size_t c = 0; c < model.components.size(); ++c)
        for (std::size_t j = 0; j < x.size(); ++j)
            x[j] += proj[c] * model.components[c][j];
    return x;
}

namespace detail {

inline void svg_num(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    out += buf;
}

} // namespace detail

inline const char* stance_color(Stance s) {
    switch (s) {
    case Stance::Against: return "#d62728";
    case Stance::Favor: return "#2ca02c";
    case Stance::None: return "#7f7f7f";
    }
    return "#000000";
}

// Stance-colored 2D scatter as SVG 1.1. Markers are circles, the legend
// uses rects; output bytes are a pure function of the input.
inline void emit_scatter(const std::vector<std::vector<double>>& points,
                         const std::vector<Stance>& labels, std::ostream& out,
                         const std::string& title = "relational embedding (PCA)") {
    if (points.size() != labels.size())
        throw std::runtime_error("emit_scatter: points/labels length mismatch");
    const double width = 640.0, height = 480.0, margin = 48.0;

    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    if (!points.empty()) {
        xmin = ymin = std::numeric_limits<double>::infinity();
        xmax = ymax = -std::numeric_limits<double>::infinity();
        for (const auto& p : points) {
            xmin = std::min(xmin, p[0]);
            xmax = std::max(xmax, p[0]);
            ymin = std::min(ymin, p[1]);
            ymax = std::max(ymax, p[1]);
        }
        if (xmax - xmin < 1e-12) { xmin -= 0.5; xmax += 0.5; }
        if (ymax - ymin < 1e-12) { ymin -= 0.5; ymax += 0.5; }
    }
    auto sx = [&](double x) {
        return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin);
    };
    auto sy = [&](double y) {
        return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin);
    };

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"640\" "
         "height=\"480\" viewBox=\"0 0 640 480\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"#ffffff\"/>\n";
    s += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">" + title + "</text>\n";
    // axes
    s += "<line x1=\"48\" y1=\"432\" x2=\"592\" y2=\"432\" stroke=\"#333333\" "
         "stroke-width=\"1\"/>\n";
    s += "<line x1=\"48\" y1=\"48\" x2=\"48\" y2=\"432\" stroke=\"#333333\" "
         "stroke-width=\"1\"/>\n";
    s += "<text x=\"320\" y=\"460\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"11\">pc1</text>\n";
    s += "<text x=\"16\" y=\"240\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"11\" transform=\"rotate(-90 16 240)\">pc2</text>\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        s += "<circle cx=\"";
        detail::svg_num(s, sx(points[i][0]));
        s += "\" cy=\"";
        detail::svg_num(s, sy(points[i][1]));
        s += "\" r=\"3\" fill=\"";
        s += stance_color(labels[i]);
        s += "\" fill-opacity=\"0.75\"/>\n";
    }
    // legend: one entry per stance class
    double ly = 56.0;
    for (Stance c : kAllStances) {
        s += "<rect x=\"500\" y=\"";
        detail::svg_num(s, ly - 9);
        s += "\" width=\"10\" height=\"10\" fill=\"";
        s += stance_color(c);
        s += "\"/>\n<text x=\"516\" y=\"";
        detail::svg_num(s, ly);
        s += "\" font-family=\"sans-serif\" font-size=\"11\">";
        s += to_string(c);
        s += "</text>\n";
        ly += 16.0;
    }
    s += "</svg>\n";
    out << s;
}

// Optional coordinate dump: `user<TAB>x<TAB>y<TAB>label`.
inline void write_projection_tsv(const std::vector<std::string>& users,
                                 const std::vector<std::vector<double>>& points,
                                 const std::vector<Stance>& labels,
                                 std::ostream& out) {
    std::string line;
    for (std::size_t i = 0; i < users.size(); ++i) {
        line.clear();
        line += users[i];
        line += '\t';
        detail::svg_num(line, points[i][0]);
        line += '\t';
        detail::svg_num(line, points[i][1]);
        line += '\t';
        line += to_string(labels[i]);
        line += '\n';
        out << line;
    }
}

} // namespace relstance
