#pragma once

// Fixed toy layouts for the pseudo-labelers and dense-matrix oracles for
// label propagation and label spreading.

#include "fairssl/ssl.hpp"

#include "helpers.hpp"

#include <Eigen/Dense>

#include <random>
#include <vector>

namespace fairssl::testing {

struct GraphToy {
    Eigen::MatrixXd points;
    PartialLabels labels;
};

/// Two tight clusters of ten nodes at opposite corners. Node 0 (cluster A) is
/// labeled 1 and node 10 (cluster B) is labeled 0; with k = 7 no edge joins
/// the clusters.
inline GraphToy two_components() {
    GraphToy t{Eigen::MatrixXd(20, 2), PartialLabels(20)};
    for (int i = 0; i < 10; ++i) {
        const double dx = 0.02 * (i % 5), dy = 0.03 * (i / 5);
        t.points.row(i) << 0.10 + dx, 0.10 + dy;
        t.points.row(10 + i) << 0.80 + dx, 0.85 + dy;
    }
    t.labels.set_ground_truth(0, 1);
    t.labels.set_ground_truth(10, 0);
    return t;
}

/// An unlabeled node halfway between a class-0 and a class-1 node.
inline GraphToy equidistant() {
    GraphToy t{Eigen::MatrixXd(3, 1), PartialLabels(3)};
    t.points << 0.4, 0.5, 0.6;
    t.labels.set_ground_truth(0, 0);
    t.labels.set_ground_truth(2, 1);
    return t;
}

/// A 4x4 grid of class-0 nodes whose inner node 5 carries the opposite label.
inline GraphToy mislabeled_center() {
    GraphToy t{Eigen::MatrixXd(16, 2), PartialLabels(16)};
    for (int i = 0; i < 16; ++i) {
        t.points.row(i) << 0.4 + 0.05 * (i % 4), 0.4 + 0.05 * (i / 4);
        t.labels.set_ground_truth(static_cast<std::size_t>(i), i == 5 ? 1 : 0);
    }
    return t;
}

/// Random layout with 5..20 nodes and at least one labeled node per class.
inline GraphToy random_graph_toy(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> size(5, 20);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = size(rng);
    GraphToy t{Eigen::MatrixXd(n, 2), PartialLabels(static_cast<std::size_t>(n))};
    for (int i = 0; i < n; ++i) t.points.row(i) << unit(rng), unit(rng);
    t.labels.set_ground_truth(0, 0);
    t.labels.set_ground_truth(1, 1);
    for (int i = 2; i < n; ++i) {
        const double u = unit(rng);
        if (u < 0.15) t.labels.set_ground_truth(static_cast<std::size_t>(i), 0);
        else if (u < 0.3) t.labels.set_ground_truth(static_cast<std::size_t>(i), 1);
    }
    return t;
}

inline Eigen::MatrixXd one_hot(const PartialLabels& labels) {
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), 2);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels.is_labeled(i)) y(static_cast<Eigen::Index>(i), labels[i].label) = 1.0;
    }
    return y;
}

/// Fixed point of clamped propagation: the harmonic solution
/// (D_uu - W_uu) F_u = W_ul Y_l on every component that holds a labeled node.
/// Unlabeled nodes in label-free components stay uniform.
inline Eigen::MatrixXd propagation_oracle(const Eigen::MatrixXd& w, const PartialLabels& labels) {
    const Eigen::Index n = w.rows();
    // Components by flood fill.
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    int comps = 0;
    for (Eigen::Index s = 0; s < n; ++s) {
        if (comp[static_cast<std::size_t>(s)] >= 0) continue;
        std::vector<Eigen::Index> stack{s};
        comp[static_cast<std::size_t>(s)] = comps;
        while (!stack.empty()) {
            const Eigen::Index v = stack.back();
            stack.pop_back();
            for (Eigen::Index u = 0; u < n; ++u) {
                if (w(v, u) > 0.0 && comp[static_cast<std::size_t>(u)] < 0) {
                    comp[static_cast<std::size_t>(u)] = comps;
                    stack.push_back(u);
                }
            }
        }
        ++comps;
    }
    std::vector<bool> comp_labeled(static_cast<std::size_t>(comps), false);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (labels.is_labeled(static_cast<std::size_t>(i))) comp_labeled[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])] = true;
    }

    const Eigen::MatrixXd y = one_hot(labels);
    Eigen::MatrixXd f = y;
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (labels.is_labeled(static_cast<std::size_t>(i))) continue;
        if (comp_labeled[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])]) {
            free.push_back(i);
        } else {
            f.row(i) << 0.5, 0.5;
        }
    }
    const auto m = static_cast<Eigen::Index>(free.size());
    if (m == 0) return f;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, 2);
    for (Eigen::Index r = 0; r < m; ++r) {
        const Eigen::Index i = free[static_cast<std::size_t>(r)];
        a(r, r) = w.row(i).sum();
        for (Eigen::Index c = 0; c < m; ++c) a(r, c) -= w(i, free[static_cast<std::size_t>(c)]);
        for (Eigen::Index j = 0; j < n; ++j) {
            if (labels.is_labeled(static_cast<std::size_t>(j))) b.row(r) += w(i, j) * y.row(j);
        }
    }
    const Eigen::MatrixXd sol = a.fullPivLu().solve(b);
    for (Eigen::Index r = 0; r < m; ++r) f.row(free[static_cast<std::size_t>(r)]) = sol.row(r);
    return f;
}

/// Closed form of spreading: F = (1 - alpha) (I - alpha S)^-1 Y with
/// S = D^-1/2 W D^-1/2, rows normalized afterwards.
inline Eigen::MatrixXd spreading_oracle(const Eigen::MatrixXd& w, const PartialLabels& labels, double alpha) {
    const Eigen::Index n = w.rows();
    Eigen::VectorXd inv_sqrt = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = w.row(i).sum();
        if (d > 0.0) inv_sqrt(i) = 1.0 / std::sqrt(d);
    }
    const Eigen::MatrixXd s = inv_sqrt.asDiagonal() * w * inv_sqrt.asDiagonal();
    const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - alpha * s;
    Eigen::MatrixXd f = (1.0 - alpha) * system.fullPivLu().solve(one_hot(labels));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double total = f.row(i).sum();
        if (total > 0.0) f.row(i) /= total;
        else f.row(i) << 0.5, 0.5;
    }
    return f;
}

/// Two separated clusters on two features plus the protected column; rows
/// 0..9 are class 0 near (0.1, 0.1), rows 10..19 class 1 near (0.9, 0.9).
inline TabularDataset separable_dataset() {
    Eigen::MatrixXd x(20, 2);
    std::vector<int> labels(20), prot(20);
    for (int i = 0; i < 20; ++i) {
        const double c = i < 10 ? 0.1 : 0.9;
        x(i, 0) = c + 0.01 * (i % 5);
        x(i, 1) = c - 0.01 * (i % 3);
        labels[static_cast<std::size_t>(i)] = i < 10 ? 0 : 1;
        prot[static_cast<std::size_t>(i)] = i % 2;
    }
    return make_dataset(x, labels, prot);
}

/// Ground truth for rows 0-2 and 10-12 only.
inline PartialLabels separable_labels(const TabularDataset& ds) {
    PartialLabels p(ds.rows());
    for (std::size_t r : {0, 1, 2, 10, 11, 12}) p.set_ground_truth(r, ds.label(r));
    return p;
}

/// d binary features. Labeled rows: four all-zero rows of class 0 and four
/// all-one rows of class 1. Each unlabeled row i has `ones[i]` leading ones.
inline TabularDataset vote_dataset(int d, const std::vector<int>& ones) {
    const int labeled = 8;
    const int n = labeled + static_cast<int>(ones.size());
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, d);
    std::vector<int> labels(static_cast<std::size_t>(n), 0), prot(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) prot[static_cast<std::size_t>(i)] = i % 2;
    for (int i = 4; i < labeled; ++i) {
        x.row(i).setOnes();
        labels[static_cast<std::size_t>(i)] = 1;
    }
    for (std::size_t u = 0; u < ones.size(); ++u) {
        for (int j = 0; j < ones[u]; ++j) x(labeled + static_cast<int>(u), j) = 1.0;
    }
    return make_dataset(x, labels, prot);
}

inline PartialLabels vote_labels(const TabularDataset& ds) {
    PartialLabels p(ds.rows());
    for (std::size_t r = 0; r < 8; ++r) p.set_ground_truth(r, ds.label(r));
    return p;
}

}  // namespace fairssl::testing
