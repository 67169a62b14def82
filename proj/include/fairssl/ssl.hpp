#pragma once

#include "fairssl/dataset.hpp"
#include "fairssl/fair_labeling.hpp"
#include "fairssl/learners.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fairssl {

enum class SslVariant : std::uint8_t { self_training, label_propagation, label_spreading, co_training };

inline constexpr std::array<SslVariant, 4> kAllSslVariants{SslVariant::self_training, SslVariant::label_propagation,
                                                           SslVariant::label_spreading, SslVariant::co_training};

SslVariant parse_ssl_variant(const std::string& code);  // "ST", "LP", "LS", "CT"
const char* to_string(SslVariant v) noexcept;
LabelSource label_source(SslVariant v) noexcept;

enum class SelectionMode : std::uint8_t { threshold, k_best };

struct GraphConfig {
    std::size_t k_neighbors = 7;
    double kernel_width = 0.25;  // RBF sigma on [0,1]-scaled features

    bool operator==(const GraphConfig&) const = default;
};

struct SSLConfig {
    double threshold = 0.7;
    SelectionMode selection_mode = SelectionMode::threshold;
    std::size_t k_best = 10;
    int max_iterations = 30;
    GraphConfig graph;
    double spreading_alpha = 0.2;
    TrainingConfig training;

    void validate() const;
    bool operator==(const SSLConfig&) const = default;
};

/// Class distribution of one candidate row.
struct ClassDistribution {
    std::size_t row = 0;
    double p0 = 0.5;
    double p1 = 0.5;
};

struct Acceptance {
    std::size_t row = 0;
    int label = 0;
    double confidence = 0.0;

    bool operator==(const Acceptance&) const = default;
};

/// Threshold mode keeps rows whose larger class probability is strictly above
/// the threshold; k_best keeps the k most confident, ties broken by row. Rows
/// with p0 == p1 have no argmax and are never accepted.
std::vector<Acceptance> select_confident(std::span<const ClassDistribution> dist, const SSLConfig& cfg);

/// Repeatedly fits logistic regression on D_l and moves confident rows of D_u
/// into D_l as pseudo labels until nothing is accepted or max_iterations.
PartialLabels self_train(const PartialLabels& labels, const TabularDataset& ds, const SSLConfig& cfg);

/// Mutual-kNN graph with RBF weights w_ij = exp(-|x_i - x_j|^2 / (2 sigma^2)).
struct AffinityGraph {
    struct Edge {
        std::size_t to = 0;
        double weight = 0.0;
    };

    std::vector<std::vector<Edge>> adjacency;  // sorted by `to`
    std::vector<double> degree;

    std::size_t nodes() const noexcept { return adjacency.size(); }
    std::size_t edge_count() const noexcept;  // undirected edges
    bool isolated(std::size_t i) const { return adjacency.at(i).empty(); }
    std::size_t isolated_count() const noexcept;
    double weight(std::size_t i, std::size_t j) const;  // 0 when not adjacent
    Eigen::MatrixXd dense() const;
};

AffinityGraph build_graph(const Eigen::MatrixXd& points, const std::vector<bool>& categorical, const GraphConfig& cfg);
/// Uses every feature column; categorical columns compare by mismatch.
AffinityGraph build_graph(const TabularDataset& ds, const GraphConfig& cfg);

struct PropagationResult {
    Eigen::MatrixXd distribution;  // n x 2, rows sum to 1
    bool converged = false;
};

/// Fixed point of clamped propagation F <- D^-1 W F with labeled rows held
/// one-hot. Unlabeled rows with no path to a labeled node stay uniform.
PropagationResult label_propagate(const AffinityGraph& graph, const PartialLabels& labels, const SSLConfig& cfg);

/// Fixed point of F <- alpha S F + (1 - alpha) Y with S = D^-1/2 W D^-1/2.
/// Labeled rows are not clamped. Output rows are normalized (all-zero rows
/// become uniform).
PropagationResult label_spread(const AffinityGraph& graph, const PartialLabels& labels, const SSLConfig& cfg);

/// One single-feature logistic model per non-protected feature column votes on
/// every unlabeled row; confidence is the majority share.
PartialLabels co_train(const PartialLabels& labels, const TabularDataset& ds, const SSLConfig& cfg);

struct PseudoLabelResult {
    PartialLabels labels;
    double runtime_seconds = 0.0;
    std::size_t accepted = 0;
    std::size_t isolated_nodes = 0;  // LP/LS only
};

PseudoLabelResult pseudo_label(SslVariant variant, const PartialLabels& labels, const TabularDataset& ds,
                               const SSLConfig& cfg);

void write_pseudo_label_audit(const std::filesystem::path& path, const TabularDataset& ds, const PartialLabels& labels);

}  // namespace fairssl
