#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fairssl {

struct Neighbor {
    std::size_t index = 0;
    double sq_distance = 0.0;

    bool operator==(const Neighbor&) const = default;
};

/// Total order used everywhere neighbors are ranked: distance, then row index.
inline bool neighbor_less(const Neighbor& a, const Neighbor& b) noexcept {
    return a.sq_distance < b.sq_distance || (a.sq_distance == b.sq_distance && a.index < b.index);
}

/// Exact k-nearest-neighbor search over a fixed point set.
///
/// Distance is Euclidean over numeric dimensions; a categorical dimension
/// contributes 1 when the codes differ. Results are ordered by neighbor_less,
/// so they equal a brute-force scan bit for bit. Internally a kd-tree split on
/// numeric dimensions only (categorical mismatch never lowers a box bound).
class NeighborIndex {
public:
    NeighborIndex() = default;
    /// `points` is n x m; `categorical` has m entries (empty = all numeric).
    explicit NeighborIndex(const Eigen::MatrixXd& points, std::vector<bool> categorical = {});

    std::size_t size() const noexcept { return n_; }
    std::size_t dims() const noexcept { return m_; }

    /// k nearest to `query`, skipping point `exclude` if given. Returns fewer
    /// than k when the set is smaller.
    std::vector<Neighbor> query(std::span<const double> query, std::size_t k,
                                std::optional<std::size_t> exclude = std::nullopt) const;
    /// Neighbors of stored point i (i itself excluded).
    std::vector<Neighbor> query_point(std::size_t i, std::size_t k) const;

    double sq_distance(std::span<const double> a, std::span<const double> b) const noexcept;
    std::span<const double> point(std::size_t i) const noexcept { return {data_.data() + i * m_, m_}; }

private:
    struct Node {
        std::size_t begin = 0;  // range into order_
        std::size_t end = 0;
        std::size_t split_dim = 0;
        double split_value = 0.0;
        int left = -1;
        int right = -1;
    };

    int build(std::size_t begin, std::size_t end);
    void search(int node, std::span<const double> q, std::size_t k, std::optional<std::size_t> exclude,
                std::vector<Neighbor>& heap) const;

    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::vector<double> data_;  // row-major n x m
    std::vector<bool> categorical_;
    std::vector<std::size_t> numeric_dims_;
    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;
};

/// Reference scan with the same ordering contract; O(n) per query.
std::vector<Neighbor> brute_force_neighbors(const Eigen::MatrixXd& points, const std::vector<bool>& categorical,
                                            std::span<const double> query, std::size_t k,
                                            std::optional<std::size_t> exclude = std::nullopt);

}  // namespace fairssl
