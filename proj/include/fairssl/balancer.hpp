#pragma once

#include "fairssl/dataset.hpp"
#include "fairssl/random.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace fairssl {

struct GroupCounts {
    std::array<std::size_t, 4> sizes{};  // indexed by GroupTag

    std::size_t operator[](GroupTag g) const noexcept { return sizes[static_cast<std::size_t>(g)]; }
    std::size_t max_size() const noexcept;
    bool balanced() const noexcept;
    bool operator==(const GroupCounts&) const = default;
};

GroupCounts group_counts(const TabularDataset& ds);

struct BalancerConfig {
    double cr = 0.8;  // per-column crossover probability
    double f = 0.8;   // mutation factor
    std::uint64_t seed = 0;

    void validate() const;
    bool operator==(const BalancerConfig&) const = default;
};

/// Columns that take part in neighbor distance: every feature except the
/// active protected attribute (the class is stored separately).
std::vector<std::size_t> distance_columns(const TabularDataset& ds);

/// k nearest rows to `parent` among `subgroup` (row indices of ds), parent
/// itself excluded, ordered by distance then row index. Throws DataError when
/// fewer than k candidates remain.
std::vector<std::size_t> nearest_neighbors(const TabularDataset& ds, std::span<const std::size_t> subgroup,
                                           std::size_t parent, std::size_t k);

/// parent + f * (c1 - c2), before clipping.
constexpr double mutation_value(double parent, double c1, double c2, double f) noexcept {
    return parent + f * (c1 - c2);
}

/// One synthetic row from a parent and its two neighbors. Numeric columns take
/// the mutation value (clipped to [0,1]) with probability cr; categorical and
/// binary columns copy c1's code with probability cr; everything else,
/// including the protected column, is copied from the parent.
Eigen::RowVectorXd mutate_row(const TabularDataset& ds, std::size_t parent, std::size_t c1, std::size_t c2,
                              const BalancerConfig& cfg, Rng& rng);

struct SyntheticProvenance {
    GroupTag group = GroupTag::FP;
    std::size_t parent = 0;  // row indices into the input dataset
    std::size_t c1 = 0;
    std::size_t c2 = 0;
};

struct BalanceResult {
    TabularDataset data;                          // originals first, then synthetic rows
    std::vector<SyntheticProvenance> provenance;  // one per synthetic row, in order
    GroupCounts before;
    std::array<std::size_t, 4> generated{};
};

/// Oversamples every group up to the largest group's size. Parents are drawn
/// uniformly with replacement from their own group; neighbors come from the
/// same group. Each group uses an RNG stream derived from (seed, group).
BalanceResult fair_smote_balance(const TabularDataset& ds, const BalancerConfig& cfg);

void write_synthetic_audit(const std::filesystem::path& path, const BalanceResult& result);

}  // namespace fairssl
