#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <list>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "relstance/core.hpp"

namespace relstance {

// exp(-gamma * ||x - y||^2)
inline double rbf_kernel(const std::vector<double>& x, const std::vector<double>& y,
                         double gamma) {
    if (x.size() != y.size())
        throw std::runtime_error("rbf_kernel: dimension mismatch (" +
                                 std::to_string(x.size()) + " vs " +
                                 std::to_string(y.size()) + ")");
    if (gamma <= 0.0) throw std::runtime_error("rbf_kernel: gamma must be > 0");
    double sq = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        double d = x[j] - y[j];
        sq += d * d;
    }
    return std::exp(-gamma * sq);
}

namespace detail {

// LRU cache of kernel matrix rows, bounded by a byte budget.
class KernelRowCache {
public:
    KernelRowCache(const std::vector<std::vector<double>>& X, double gamma,
                   std::size_t byte_budget)
        : X_(X), gamma_(gamma),
          max_rows_(std::max<std::size_t>(
              2, byte_budget / (sizeof(double) * std::max<std::size_t>(1, X.size())))) {}

    const std::vector<double>& row(std::size_t i) {
        auto it = cache_.find(i);
        if (it != cache_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second.second);
            return it->second.first;
        }
        if (cache_.size() >= max_rows_) {
            cache_.erase(lru_.back());
            lru_.pop_back();
        }
        std::vector<double> r(X_.size());
        for (std::size_t j = 0; j < X_.size(); ++j)
            r[j] = rbf_kernel(X_[i], X_[j], gamma_);
        lru_.push_front(i);
        auto [pos, ok] = cache_.emplace(i, std::make_pair(std::move(r), lru_.begin()));
        return pos->second.first;
    }

private:
    const std::vector<std::vector<double>>& X_;
    double gamma_;
    std::size_t max_rows_;
    std::unordered_map<std::size_t,
                       std::pair<std::vector<double>, std::list<std::size_t>::iterator>>
        cache_;
    std::list<std::size_t> lru_;
};

} // namespace detail

struct SmoOptions {
    double eps = 1e-3;              // stopping tolerance on the KKT gap
    std::size_t max_iterations = 0; // 0: use 10 * n * n_classes
    std::size_t cache_bytes = 64ull << 20;
};

// Full dual solution of one binary C-SVC problem, kept around so callers
// can audit the end state (alphas, KKT gap) independently of the model.
struct BinarySvc {
    std::vector<double> alpha; // one per training row, in [0, C]
    double bias = 0.0;         // decision(x) = sum_i alpha_i y_i K(x, x_i) + bias
    double kkt_violation = 0.0;
    std::size_t iterations = 0;
};

// SMO with second-order working-pair selection. y entries must be +-1.
inline BinarySvc smo_solve(const std::vector<std::vector<double>>& X,
                           const std::vector<int>& y, double C, double gamma,
                           const SmoOptions& opt, std::size_t max_iter) {
    const std::size_t n = X.size();
    constexpr double kTau = 1e-12;
    detail::KernelRowCache cache(X, gamma, opt.cache_bytes);

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0); // G_i = sum_j Q_ij a_j - 1
    auto Q = [&](const std::vector<double>& krow, std::size_t i, std::size_t j) {
        return y[i] * y[j] * krow[j];
    };

    BinarySvc result;
    std::size_t iter = 0;
    double gap = std::numeric_limits<double>::infinity();
    while (iter < max_iter) {
        // i: argmax over I_up of -y_t G_t; M: min over I_low
        double m = -std::numeric_limits<double>::infinity();
        double M = std::numeric_limits<double>::infinity();
        std::size_t i = n;
        for (std::size_t t = 0; t < n; ++t) {
            bool up = (y[t] > 0 && alpha[t] < C) || (y[t] < 0 && alpha[t] > 0);
            if (up && -y[t] * grad[t] > m) {
                m = -y[t] * grad[t];
                i = t;
            }
            bool low = (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < C);
            if (low) M = std::min(M, -y[t] * grad[t]);
        }
        gap = m - M;
        if (i == n || gap <= opt.eps) break;

        const std::vector<double>& ki = cache.row(i);
        std::size_t j = n;
        double best_obj = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            bool low = (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < C);
            if (!low) continue;
            double b = m + y[t] * grad[t];
            if (b <= 0.0) continue;
            double a = 2.0 - 2.0 * ki[t]; // K_ii = K_tt = 1 for RBF
            if (a <= 0.0) a = kTau;
            double obj = -(b * b) / a;
            if (obj < best_obj) {
                best_obj = obj;
                j = t;
            }
        }
        if (j == n) break;

        const std::vector<double>& kj = cache.row(j);
        double quad = 2.0 - 2.0 * ki[j];
        if (quad <= 0.0) quad = kTau;
        double old_ai = alpha[i], old_aj = alpha[j];

        if (y[i] != y[j]) {
            double delta = (-grad[i] - grad[j]) / quad;
            double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0) {
                if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = diff; }
            } else {
                if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = -diff; }
            }
            if (diff > 0) {
                if (alpha[i] > C) { alpha[i] = C; alpha[j] = C - diff; }
            } else {
                if (alpha[j] > C) { alpha[j] = C; alpha[i] = C + diff; }
            }
        } else {
            double delta = (grad[i] - grad[j]) / quad;
            double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > C) {
                if (alpha[i] > C) { alpha[i] = C; alpha[j] = sum - C; }
            } else {
                if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = sum; }
            }
            if (sum > C) {
                if (alpha[j] > C) { alpha[j] = C; alpha[i] = sum - C; }
            } else {
                if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = sum; }
            }
        }

        double dai = alpha[i] - old_ai, daj = alpha[j] - old_aj;
        for (std::size_t t = 0; t < n; ++t)
            grad[t] += Q(ki, t, i) * dai + Q(kj, t, j) * daj;
        ++iter;
    }

    // bias from the free support vectors, else midpoint of the bounds
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        double yg = y[t] * grad[t];
        if (alpha[t] >= C) {
            if (y[t] < 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else if (alpha[t] <= 0.0) {
            if (y[t] > 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;

    result.alpha = std::move(alpha);
    result.bias = -rho;
    result.kkt_violation = std::max(0.0, gap);
    result.iterations = iter;
    return result;
}

// Recomputes m(alpha) - M(alpha) from scratch; used to audit solver output.
inline double kkt_violation(const std::vector<std::vector<double>>& X,
                            const std::vector<int>& y,
                            const std::vector<double>& alpha, double C,
                            double gamma) {
    const std::size_t n = X.size();
    double m = -std::numeric_limits<double>::infinity();
    double M = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
        double g = -1.0;
        for (std::size_t j = 0; j < n; ++j)
            if (alpha[j] > 0)
                g += y[t] * y[j] * rbf_kernel(X[t], X[j], gamma) * alpha[j];
        bool up = (y[t] > 0 && alpha[t] < C) || (y[t] < 0 && alpha[t] > 0);
        bool low = (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < C);
        if (up) m = std::max(m, -y[t] * g);
        if (low) M = std::min(M, -y[t] * g);
    }
    return m - M;
}

// One-vs-rest RBF SVM over the three stance classes.
class SvmModel {
public:
    struct Machine {
        Stance positive_class = Stance::None;
        std::vector<std::vector<double>> support_vectors;
        std::vector<double> coef; // alpha_i * y_i
        double bias = 0.0;
        double kkt_violation = 0.0;
        std::size_t iterations = 0;
    };

    std::vector<Stance> classes;
    std::vector<Machine> machines;
    double C = 1.0;
    double gamma = 0.5;
    std::size_t feature_dim = 0;

    double decision_value(const Machine& m, const std::vector<double>& x) const {
        double v = m.bias;
        for (std::size_t i = 0; i < m.support_vectors.size(); ++i)
            v += m.coef[i] * rbf_kernel(x, m.support_vectors[i], gamma);
        return v;
    }

    nlohmann::json to_json() const {
        nlohmann::json jm = nlohmann::json::array();
        for (const auto& m : machines)
            jm.push_back({{"class", to_string(m.positive_class)},
                          {"support_vectors", m.support_vectors},
                          {"coef", m.coef},
                          {"bias", m.bias}});
        nlohmann::json jc = nlohmann::json::array();
        for (Stance c : classes) jc.push_back(to_string(c));
        return {{"version", 1},   {"type", "svm_rbf_ovr"}, {"C", C},
                {"gamma", gamma}, {"classes", jc},          {"machines", jm},
                {"feature_dim", feature_dim}};
    }

    static SvmModel from_json(const nlohmann::json& j) {
        if (!j.contains("version"))
            throw std::runtime_error("svm model json is missing 'version'");
        SvmModel m;
        m.C = j.at("C").get<double>();
        m.gamma = j.at("gamma").get<double>();
        m.feature_dim = j.at("feature_dim").get<std::size_t>();
        for (const auto& c : j.at("classes"))
            m.classes.push_back(stance_from_string(c.get<std::string>()));
        for (const auto& jm : j.at("machines")) {
            Machine mach;
            mach.positive_class = stance_from_string(jm.at("class").get<std::string>());
            mach.support_vectors =
                jm.at("support_vectors").get<std::vector<std::vector<double>>>();
            mach.coef = jm.at("coef").get<std::vector<double>>();
            mach.bias = jm.at("bias").get<double>();
            m.machines.push_back(std::move(mach));
        }
        return m;
    }
};

// Trains one binary machine per class present in y (positive = that class).
// Deterministic for a given row order.
inline SvmModel svm_fit(const std::vector<std::vector<double>>& X,
                        const std::vector<Stance>& y, double C, double gamma,
                        const SmoOptions& opt = {}) {
    if (X.size() != y.size() || X.empty())
        throw std::runtime_error("svm_fit: X and y must be non-empty and aligned");
    const std::size_t dim = X[0].size();
    for (const auto& row : X) {
        if (row.size() != dim)
            throw std::runtime_error("svm_fit: inconsistent feature dimensions");
        for (double v : row)
            if (!std::isfinite(v))
                throw std::runtime_error("svm_fit: non-finite feature value");
    }
    if (C <= 0.0) throw std::runtime_error("svm_fit: C must be > 0");

    std::array<std::size_t, 3> class_count{};
    for (Stance s : y) class_count[static_cast<int>(s)]++;
    std::vector<Stance> present;
    for (Stance s : kAllStances)
        if (class_count[static_cast<int>(s)] > 0) present.push_back(s);
    if (present.size() < 2)
        throw std::runtime_error("svm_fit: need at least 2 distinct labels");

    SvmModel model;
    model.classes = present;
    model.C = C;
    model.gamma = gamma;
    model.feature_dim = dim;
    std::size_t max_iter = opt.max_iterations
                               ? opt.max_iterations
                               : 10 * X.size() * present.size();

    for (Stance cls : present) {
        std::vector<int> yy(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) yy[i] = (y[i] == cls) ? 1 : -1;
        BinarySvc sol = smo_solve(X, yy, C, gamma, opt, max_iter);
        SvmModel::Machine m;
        m.positive_class = cls;
        m.bias = sol.bias;
        m.kkt_violation = sol.kkt_violation;
        m.iterations = sol.iterations;
        for (std::size_t i = 0; i < sol.alpha.size(); ++i) {
            if (sol.alpha[i] > 0.0) {
                m.support_vectors.push_back(X[i]);
                m.coef.push_back(sol.alpha[i] * yy[i]);
            }
        }
        model.machines.push_back(std::move(m));
    }
    return model;
}

// Per-class decision values; label = argmax with the fixed class order
// breaking ties. Classes without a machine score -inf.
inline Prediction svm_predict(const SvmModel& model, const std::vector<double>& x,
                              PredictionSource source = PredictionSource::Ensemble) {
    if (x.size() != model.feature_dim)
        throw std::runtime_error("svm_predict: feature dimension mismatch (" +
                                 std::to_string(x.size()) + " vs " +
                                 std::to_string(model.feature_dim) + ")");
    Prediction p;
    p.source = source;
    p.scores = {-std::numeric_limits<double>::infinity(),
                -std::numeric_limits<double>::infinity(),
                -std::numeric_limits<double>::infinity()};
    for (const auto& m : model.machines)
        p.scores[static_cast<int>(m.positive_class)] = model.decision_value(m, x);
    p.label = argmax_stance(p.scores);
    return p;
}

} // namespace relstance
