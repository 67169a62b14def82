#include "fairssl/neighbors.hpp"

#include "fairssl/error.hpp"

#include <algorithm>
#include <numeric>

namespace fairssl {

namespace {

constexpr std::size_t kLeafSize = 16;

double sq_dist(std::span<const double> a, std::span<const double> b, const std::vector<bool>& categorical) noexcept {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (!categorical.empty() && categorical[j]) {
            s += a[j] != b[j] ? 1.0 : 0.0;
        } else {
            const double d = a[j] - b[j];
            s += d * d;
        }
    }
    return s;
}

// Max-heap on neighbor_less: heap.front() is the current worst of the best k.
void push_candidate(std::vector<Neighbor>& heap, std::size_t k, Neighbor cand) {
    if (heap.size() < k) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end(), neighbor_less);
    } else if (neighbor_less(cand, heap.front())) {
        std::pop_heap(heap.begin(), heap.end(), neighbor_less);
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end(), neighbor_less);
    }
}

}  // namespace

NeighborIndex::NeighborIndex(const Eigen::MatrixXd& points, std::vector<bool> categorical)
    : n_(static_cast<std::size_t>(points.rows())),
      m_(static_cast<std::size_t>(points.cols())),
      categorical_(std::move(categorical)) {
    if (!categorical_.empty() && categorical_.size() != m_) {
        throw DataError("categorical mask size does not match point dimension");
    }
    data_.resize(n_ * m_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < m_; ++j) {
            data_[i * m_ + j] = points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    for (std::size_t j = 0; j < m_; ++j) {
        if (categorical_.empty() || !categorical_[j]) numeric_dims_.push_back(j);
    }
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    if (n_ > 0) {
        nodes_.reserve(2 * (n_ / kLeafSize + 1));
        build(0, n_);
    }
}

int NeighborIndex::build(std::size_t begin, std::size_t end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{begin, end});
    if (end - begin <= kLeafSize || numeric_dims_.empty()) return id;

    std::size_t best_dim = numeric_dims_.front();
    double best_spread = -1.0;
    for (std::size_t dim : numeric_dims_) {
        double lo = data_[order_[begin] * m_ + dim];
        double hi = lo;
        for (std::size_t p = begin + 1; p < end; ++p) {
            const double v = data_[order_[p] * m_ + dim];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi - lo > best_spread) {
            best_spread = hi - lo;
            best_dim = dim;
        }
    }
    if (best_spread <= 0.0) return id;  // all points coincide on numeric dims

    const std::size_t mid = begin + (end - begin) / 2;
    auto key = [&](std::size_t idx) { return data_[idx * m_ + best_dim]; };
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                     order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) { return key(a) < key(b) || (key(a) == key(b) && a < b); });
    const double split = key(order_[mid]);
    nodes_[static_cast<std::size_t>(id)].split_dim = best_dim;
    nodes_[static_cast<std::size_t>(id)].split_value = split;
    // Left holds [begin, mid) with values <= split, right [mid, end) with values >= split.
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[static_cast<std::size_t>(id)].left = left;
    nodes_[static_cast<std::size_t>(id)].right = right;
    return id;
}

void NeighborIndex::search(int node_id, std::span<const double> q, std::size_t k, std::optional<std::size_t> exclude,
                           std::vector<Neighbor>& heap) const {
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    if (node.left < 0) {
        for (std::size_t p = node.begin; p < node.end; ++p) {
            const std::size_t idx = order_[p];
            if (exclude && *exclude == idx) continue;
            push_candidate(heap, k, {idx, sq_dist(q, point(idx), categorical_)});
        }
        return;
    }
    const double diff = q[node.split_dim] - node.split_value;
    const int near = diff <= 0.0 ? node.left : node.right;
    const int far = diff <= 0.0 ? node.right : node.left;
    search(near, q, k, exclude, heap);
    // Ties at equal distance may still win on index, so only prune strictly farther boxes.
    if (heap.size() < k || diff * diff <= heap.front().sq_distance) search(far, q, k, exclude, heap);
}

std::vector<Neighbor> NeighborIndex::query(std::span<const double> q, std::size_t k,
                                           std::optional<std::size_t> exclude) const {
    if (q.size() != m_) throw DataError("query dimension does not match index");
    std::vector<Neighbor> heap;
    if (k == 0 || n_ == 0) return heap;
    heap.reserve(k + 1);
    search(0, q, k, exclude, heap);
    std::sort_heap(heap.begin(), heap.end(), neighbor_less);
    return heap;
}

std::vector<Neighbor> NeighborIndex::query_point(std::size_t i, std::size_t k) const {
    return query(point(i), k, i);
}

double NeighborIndex::sq_distance(std::span<const double> a, std::span<const double> b) const noexcept {
    return sq_dist(a, b, categorical_);
}

std::vector<Neighbor> brute_force_neighbors(const Eigen::MatrixXd& points, const std::vector<bool>& categorical,
                                            std::span<const double> query, std::size_t k,
                                            std::optional<std::size_t> exclude) {
    std::vector<Neighbor> all;
    std::vector<double> row(static_cast<std::size_t>(points.cols()));
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        if (exclude && *exclude == static_cast<std::size_t>(i)) continue;
        for (Eigen::Index j = 0; j < points.cols(); ++j) row[static_cast<std::size_t>(j)] = points(i, j);
        all.push_back({static_cast<std::size_t>(i), sq_dist(query, row, categorical)});
    }
    std::sort(all.begin(), all.end(), neighbor_less);
    if (all.size() > k) all.resize(k);
    return all;
}

}  // namespace fairssl
