#include "fairssl/ssl.hpp"

#include "fairssl/error.hpp"
#include "fairssl/neighbors.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

namespace fairssl {

SslVariant parse_ssl_variant(const std::string& code) {
    if (code == "ST") return SslVariant::self_training;
    if (code == "LP") return SslVariant::label_propagation;
    if (code == "LS") return SslVariant::label_spreading;
    if (code == "CT") return SslVariant::co_training;
    throw ConfigError("unknown semi-supervised variant '" + code + "' (expected ST, LP, LS or CT)");
}

const char* to_string(SslVariant v) noexcept {
    switch (v) {
        case SslVariant::self_training: return "ST";
        case SslVariant::label_propagation: return "LP";
        case SslVariant::label_spreading: return "LS";
        case SslVariant::co_training: return "CT";
    }
    return "ST";
}

LabelSource label_source(SslVariant v) noexcept {
    switch (v) {
        case SslVariant::self_training: return LabelSource::self_training;
        case SslVariant::label_propagation: return LabelSource::label_propagation;
        case SslVariant::label_spreading: return LabelSource::label_spreading;
        case SslVariant::co_training: return LabelSource::co_training;
    }
    return LabelSource::none;
}

void SSLConfig::validate() const {
    if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must lie in (0, 1)");
    if (selection_mode == SelectionMode::k_best && k_best < 1) throw ConfigError("k_best must be >= 1");
    if (max_iterations < 0) throw ConfigError("max_iterations must be >= 0");
    if (graph.k_neighbors < 1) throw ConfigError("k_neighbors must be >= 1");
    if (!(graph.kernel_width > 0.0)) throw ConfigError("kernel_width must be positive");
    if (!(spreading_alpha > 0.0 && spreading_alpha < 1.0)) throw ConfigError("spreading_alpha must lie in (0, 1)");
}

// ---------------------------------------------------------------------------
// Selection

std::vector<Acceptance> select_confident(std::span<const ClassDistribution> dist, const SSLConfig& cfg) {
    std::vector<Acceptance> candidates;
    candidates.reserve(dist.size());
    for (const auto& d : dist) {
        if (d.p0 == d.p1) continue;
        const int label = d.p1 > d.p0 ? 1 : 0;
        candidates.push_back({d.row, label, std::max(d.p0, d.p1)});
    }
    if (cfg.selection_mode == SelectionMode::threshold) {
        std::erase_if(candidates, [&](const Acceptance& a) { return !(a.confidence > cfg.threshold); });
        return candidates;
    }
    std::sort(candidates.begin(), candidates.end(), [](const Acceptance& a, const Acceptance& b) {
        return a.confidence > b.confidence || (a.confidence == b.confidence && a.row < b.row);
    });
    if (candidates.size() > cfg.k_best) candidates.resize(cfg.k_best);
    return candidates;
}

namespace {

void require_both_classes(const PartialLabels& labels, const char* who) {
    bool has[2] = {false, false};
    for (const auto& e : labels.entries()) {
        if (e.state != LabelState::unlabeled) has[e.label] = true;
    }
    if (!has[0] || !has[1]) {
        throw DataError(std::string(who) + " needs at least one labeled row of each class");
    }
}

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& x, const std::vector<std::size_t>& rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
    return out;
}

// Shared incremental loop of self-training and co-training. `score` maps
// (labeled rows, their targets, unlabeled rows) to class distributions.
template <typename ScoreFn>
PartialLabels incremental_loop(const PartialLabels& labels, const SSLConfig& cfg, LabelSource source, ScoreFn score) {
    PartialLabels current = labels;
    for (int iteration = 1; iteration <= cfg.max_iterations; ++iteration) {
        const auto unlabeled = current.unlabeled_rows();
        if (unlabeled.empty()) break;
        const auto labeled = current.labeled_rows();
        const Eigen::VectorXd targets = current.labeled_targets();
        const std::vector<ClassDistribution> dist = score(labeled, targets, unlabeled);
        const auto accepted = select_confident(dist, cfg);
        if (accepted.empty()) break;
        for (const auto& a : accepted) current.set_pseudo(a.row, a.label, a.confidence, source, iteration);
    }
    return current;
}

}  // namespace

PartialLabels self_train(const PartialLabels& labels, const TabularDataset& ds, const SSLConfig& cfg) {
    cfg.validate();
    if (labels.size() != ds.rows()) throw DataError("label state and dataset sizes differ");
    if (cfg.max_iterations == 0) return labels;
    require_both_classes(labels, "self-training");

    return incremental_loop(labels, cfg, LabelSource::self_training,
                            [&](const std::vector<std::size_t>& labeled, const Eigen::VectorXd& targets,
                                const std::vector<std::size_t>& unlabeled) {
                                const LogisticModel model = fit_logistic(gather_rows(ds.features, labeled), targets,
                                                                         cfg.training);
                                const Eigen::VectorXd p = model.predict_proba(gather_rows(ds.features, unlabeled));
                                std::vector<ClassDistribution> dist(unlabeled.size());
                                for (std::size_t i = 0; i < unlabeled.size(); ++i) {
                                    const double p1 = p(static_cast<Eigen::Index>(i));
                                    dist[i] = {unlabeled[i], 1.0 - p1, p1};
                                }
                                return dist;
                            });
}

PartialLabels co_train(const PartialLabels& labels, const TabularDataset& ds, const SSLConfig& cfg) {
    cfg.validate();
    if (labels.size() != ds.rows()) throw DataError("label state and dataset sizes differ");
    std::vector<std::size_t> views;
    for (std::size_t f = 0; f < ds.cols(); ++f) {
        if (f != ds.protected_column) views.push_back(f);
    }
    if (views.size() < 2) throw DataError("co-training needs at least two non-protected features");
    if (cfg.max_iterations == 0) return labels;
    require_both_classes(labels, "co-training");

    const double d = static_cast<double>(views.size());
    return incremental_loop(
        labels, cfg, LabelSource::co_training,
        [&](const std::vector<std::size_t>& labeled, const Eigen::VectorXd& targets,
            const std::vector<std::size_t>& unlabeled) {
            std::vector<int> votes_for_one(unlabeled.size(), 0);
            for (std::size_t f : views) {
                const auto col = static_cast<Eigen::Index>(f);
                Eigen::MatrixXd xl(static_cast<Eigen::Index>(labeled.size()), 1);
                for (std::size_t i = 0; i < labeled.size(); ++i) {
                    xl(static_cast<Eigen::Index>(i), 0) = ds.features(static_cast<Eigen::Index>(labeled[i]), col);
                }
                Eigen::MatrixXd xu(static_cast<Eigen::Index>(unlabeled.size()), 1);
                for (std::size_t i = 0; i < unlabeled.size(); ++i) {
                    xu(static_cast<Eigen::Index>(i), 0) = ds.features(static_cast<Eigen::Index>(unlabeled[i]), col);
                }
                const std::vector<int> pred = fit_logistic(xl, targets, cfg.training).predict(xu);
                for (std::size_t i = 0; i < unlabeled.size(); ++i) votes_for_one[i] += pred[i];
            }
            std::vector<ClassDistribution> dist(unlabeled.size());
            for (std::size_t i = 0; i < unlabeled.size(); ++i) {
                const double p1 = votes_for_one[i] / d;
                dist[i] = {unlabeled[i], (d - votes_for_one[i]) / d, p1};
            }
            return dist;
        });
}

// ---------------------------------------------------------------------------
// Graph

std::size_t AffinityGraph::edge_count() const noexcept {
    std::size_t total = 0;
    for (const auto& adj : adjacency) total += adj.size();
    return total / 2;
}

std::size_t AffinityGraph::isolated_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(adjacency.begin(), adjacency.end(), [](const auto& adj) { return adj.empty(); }));
}

double AffinityGraph::weight(std::size_t i, std::size_t j) const {
    const auto& adj = adjacency.at(i);
    auto it = std::lower_bound(adj.begin(), adj.end(), j, [](const Edge& e, std::size_t v) { return e.to < v; });
    return it != adj.end() && it->to == j ? it->weight : 0.0;
}

Eigen::MatrixXd AffinityGraph::dense() const {
    const auto n = static_cast<Eigen::Index>(nodes());
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < nodes(); ++i) {
        for (const auto& e : adjacency[i]) w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(e.to)) = e.weight;
    }
    return w;
}

AffinityGraph build_graph(const Eigen::MatrixXd& points, const std::vector<bool>& categorical, const GraphConfig& cfg) {
    const auto n = static_cast<std::size_t>(points.rows());
    if (n < 2) throw DataError("a graph needs at least two rows");
    if (cfg.k_neighbors < 1 || !(cfg.kernel_width > 0.0)) throw ConfigError("invalid graph config");

    const NeighborIndex index(points, categorical);
    std::vector<std::vector<Neighbor>> knn(n);
    for (std::size_t i = 0; i < n; ++i) {
        knn[i] = index.query_point(i, cfg.k_neighbors);
        std::sort(knn[i].begin(), knn[i].end(), [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
    }
    auto lists = [&](std::size_t from, std::size_t to) {
        const auto& l = knn[from];
        return std::binary_search(l.begin(), l.end(), Neighbor{to, 0.0},
                                  [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
    };

    const double denom = 2.0 * cfg.kernel_width * cfg.kernel_width;
    AffinityGraph g;
    g.adjacency.resize(n);
    g.degree.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& nb : knn[i]) {
            if (lists(nb.index, i)) {
                const double w = std::exp(-nb.sq_distance / denom);
                g.adjacency[i].push_back({nb.index, w});
                g.degree[i] += w;
            }
        }
    }
    return g;
}

AffinityGraph build_graph(const TabularDataset& ds, const GraphConfig& cfg) {
    std::vector<bool> categorical(ds.cols(), false);
    for (std::size_t f = 0; f < ds.cols(); ++f) {
        categorical[f] = ds.feature_schema[f].kind == ColumnKind::categorical &&
                         ds.feature_schema[f].role != ColumnRole::protected_attr;
    }
    return build_graph(ds.features, categorical, cfg);
}

// ---------------------------------------------------------------------------
// Propagation

namespace {

void check_graph_labels(const AffinityGraph& graph, const PartialLabels& labels, const SSLConfig& cfg,
                        const char* who) {
    cfg.validate();
    if (graph.nodes() != labels.size()) throw DataError("graph and label state sizes differ");
    require_both_classes(labels, who);
}

// Nodes connected (possibly through other nodes) to at least one labeled node.
std::vector<bool> reaches_label(const AffinityGraph& graph, const PartialLabels& labels) {
    const std::size_t n = graph.nodes();
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < n; ++i) {
        if (labels.is_labeled(i)) {
            seen[i] = true;
            stack.push_back(i);
        }
    }
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        for (const auto& e : graph.adjacency[i]) {
            if (!seen[e.to]) {
                seen[e.to] = true;
                stack.push_back(e.to);
            }
        }
    }
    return seen;
}

void normalize_rows(Eigen::MatrixXd& f) {
    for (Eigen::Index r = 0; r < f.rows(); ++r) {
        f.row(r) = f.row(r).cwiseMax(0.0);
        const double total = f(r, 0) + f(r, 1);
        if (total > 0.0) {
            f.row(r) /= total;
        } else {
            f.row(r) << 0.5, 0.5;
        }
    }
}

}  // namespace

// Both operators are solved directly for the fixed point of their iteration.
// Plain iteration mixes slowly when unlabeled nodes are tightly bound to each
// other and only loosely to any label, and stalls far from the fixed point.

PropagationResult label_propagate(const AffinityGraph& graph, const PartialLabels& labels, const SSLConfig& cfg) {
    check_graph_labels(graph, labels, cfg, "label propagation");
    const std::size_t n = graph.nodes();
    Eigen::MatrixXd f(static_cast<Eigen::Index>(n), 2);
    const std::vector<bool> reachable = reaches_label(graph, labels);
    std::vector<Eigen::Index> slot(n, -1);
    Eigen::Index free_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        const auto& e = labels[i];
        if (e.state != LabelState::unlabeled) {
            f(r, 0) = e.label == 0 ? 1.0 : 0.0;
            f(r, 1) = e.label == 1 ? 1.0 : 0.0;
        } else {
            f.row(r) << 0.5, 0.5;
            if (reachable[i]) slot[i] = free_count++;
        }
    }

    PropagationResult result;
    result.converged = true;
    if (free_count > 0) {
        // Harmonic system on the free nodes: (D_uu - W_uu) F_u = W_ul Y_l.
        std::vector<Eigen::Triplet<double>> entries;
        Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(free_count, 2);
        for (std::size_t i = 0; i < n; ++i) {
            if (slot[i] < 0) continue;
            entries.emplace_back(slot[i], slot[i], graph.degree[i]);
            for (const auto& e : graph.adjacency[i]) {
                if (slot[e.to] >= 0) {
                    entries.emplace_back(slot[i], slot[e.to], -e.weight);
                } else {
                    rhs.row(slot[i]) += e.weight * f.row(static_cast<Eigen::Index>(e.to));
                }
            }
        }
        Eigen::SparseMatrix<double> a(free_count, free_count);
        a.setFromTriplets(entries.begin(), entries.end());
        const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
        result.converged = solver.info() == Eigen::Success;
        if (!result.converged) throw DataError("label propagation: harmonic system could not be factorized");
        const Eigen::MatrixXd sol = solver.solve(rhs);
        for (std::size_t i = 0; i < n; ++i) {
            if (slot[i] >= 0) f.row(static_cast<Eigen::Index>(i)) = sol.row(slot[i]);
        }
    }
    normalize_rows(f);
    result.distribution = std::move(f);
    return result;
}

PropagationResult label_spread(const AffinityGraph& graph, const PartialLabels& labels, const SSLConfig& cfg) {
    check_graph_labels(graph, labels, cfg, "label spreading");
    const std::size_t n = graph.nodes();
    const auto size = static_cast<Eigen::Index>(n);
    const double alpha = cfg.spreading_alpha;
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(size, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = labels[i];
        if (e.state != LabelState::unlabeled) y(static_cast<Eigen::Index>(i), e.label) = 1.0;
    }
    std::vector<double> inv_sqrt_degree(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (graph.degree[i] > 0.0) inv_sqrt_degree[i] = 1.0 / std::sqrt(graph.degree[i]);
    }

    // (I - alpha S) F = (1 - alpha) Y; symmetric positive definite for alpha < 1.
    std::vector<Eigen::Triplet<double>> entries;
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        entries.emplace_back(r, r, 1.0);
        for (const auto& e : graph.adjacency[i]) {
            entries.emplace_back(r, static_cast<Eigen::Index>(e.to),
                                 -alpha * e.weight * inv_sqrt_degree[i] * inv_sqrt_degree[e.to]);
        }
    }
    Eigen::SparseMatrix<double> a(size, size);
    a.setFromTriplets(entries.begin(), entries.end());
    const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
    if (solver.info() != Eigen::Success) throw DataError("label spreading: system could not be factorized");

    PropagationResult result;
    result.converged = true;
    Eigen::MatrixXd f = solver.solve((1.0 - alpha) * y);
    normalize_rows(f);
    result.distribution = std::move(f);
    return result;
}

// ---------------------------------------------------------------------------
// Dispatch

PseudoLabelResult pseudo_label(SslVariant variant, const PartialLabels& labels, const TabularDataset& ds,
                               const SSLConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    PseudoLabelResult out;
    switch (variant) {
        case SslVariant::self_training: out.labels = self_train(labels, ds, cfg); break;
        case SslVariant::co_training: out.labels = co_train(labels, ds, cfg); break;
        case SslVariant::label_propagation:
        case SslVariant::label_spreading: {
            if (labels.size() != ds.rows()) throw DataError("label state and dataset sizes differ");
            out.labels = labels;
            if (labels.count(LabelState::unlabeled) == 0) break;
            const AffinityGraph graph = build_graph(ds, cfg.graph);
            out.isolated_nodes = graph.isolated_count();
            const PropagationResult prop = variant == SslVariant::label_propagation
                                               ? label_propagate(graph, labels, cfg)
                                               : label_spread(graph, labels, cfg);
            std::vector<ClassDistribution> dist;
            for (std::size_t r : labels.unlabeled_rows()) {
                const auto i = static_cast<Eigen::Index>(r);
                dist.push_back({r, prop.distribution(i, 0), prop.distribution(i, 1)});
            }
            for (const auto& a : select_confident(dist, cfg)) {
                out.labels.set_pseudo(a.row, a.label, a.confidence, label_source(variant), 1);
            }
            break;
        }
    }
    out.accepted = out.labels.count(LabelState::pseudo) - labels.count(LabelState::pseudo);
    out.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

void write_pseudo_label_audit(const std::filesystem::path& path, const TabularDataset& ds, const PartialLabels& labels) {
    if (labels.size() != ds.rows()) throw DataError("label state and dataset sizes differ");
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "row_id,variant,label,confidence,iteration\n";
    out.precision(17);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto& e = labels[i];
        if (e.state != LabelState::pseudo) continue;
        out << ds.row_ids[i] << ',' << to_string(e.source) << ',' << e.label << ',' << e.confidence << ','
            << e.iteration << '\n';
    }
}

}  // namespace fairssl
