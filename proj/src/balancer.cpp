#include "fairssl/balancer.hpp"

#include "fairssl/error.hpp"
#include "fairssl/neighbors.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

namespace fairssl {

std::size_t GroupCounts::max_size() const noexcept { return *std::max_element(sizes.begin(), sizes.end()); }

bool GroupCounts::balanced() const noexcept {
    return std::all_of(sizes.begin(), sizes.end(), [&](std::size_t s) { return s == sizes[0]; });
}

GroupCounts group_counts(const TabularDataset& ds) {
    GroupCounts c;
    for (std::size_t i = 0; i < ds.rows(); ++i) c.sizes[static_cast<std::size_t>(ds.group(i))]++;
    return c;
}

void BalancerConfig::validate() const {
    if (!(cr >= 0.0 && cr <= 1.0)) throw ConfigError("cr must lie in [0, 1]");
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("f must lie in [0, 1]");
}

std::vector<std::size_t> distance_columns(const TabularDataset& ds) {
    std::vector<std::size_t> cols;
    for (std::size_t f = 0; f < ds.cols(); ++f) {
        if (f != ds.protected_column) cols.push_back(f);
    }
    return cols;
}

namespace {

bool is_code_column(const TabularDataset& ds, std::size_t f) {
    return ds.feature_schema[f].kind != ColumnKind::numeric || ds.feature_schema[f].role != ColumnRole::feature;
}

// Points of `rows` restricted to the distance columns, plus categorical mask.
NeighborIndex subgroup_index(const TabularDataset& ds, std::span<const std::size_t> rows) {
    const auto cols = distance_columns(ds);
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    std::vector<bool> categorical(cols.size(), false);
    for (std::size_t j = 0; j < cols.size(); ++j) {
        categorical[j] = ds.feature_schema[cols[j]].kind == ColumnKind::categorical;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            pts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                ds.features(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(cols[j]));
        }
    }
    return NeighborIndex(pts, std::move(categorical));
}

}  // namespace

std::vector<std::size_t> nearest_neighbors(const TabularDataset& ds, std::span<const std::size_t> subgroup,
                                           std::size_t parent, std::size_t k) {
    // Sorted rows make local-index ties coincide with dataset-row ties.
    std::vector<std::size_t> rows(subgroup.begin(), subgroup.end());
    std::sort(rows.begin(), rows.end());
    const auto self = std::lower_bound(rows.begin(), rows.end(), parent);
    const bool parent_in_group = self != rows.end() && *self == parent;
    const std::size_t candidates = rows.size() - (parent_in_group ? 1 : 0);
    if (candidates < k) {
        throw DataError("subgroup has " + std::to_string(candidates) + " candidate neighbors, need " + std::to_string(k));
    }
    const NeighborIndex index = subgroup_index(ds, rows);
    const auto cols = distance_columns(ds);
    std::vector<double> q(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        q[j] = ds.features(static_cast<Eigen::Index>(parent), static_cast<Eigen::Index>(cols[j]));
    }
    std::optional<std::size_t> exclude;
    if (parent_in_group) exclude = static_cast<std::size_t>(self - rows.begin());
    std::vector<std::size_t> out;
    for (const auto& nb : index.query(q, k, exclude)) out.push_back(rows[nb.index]);
    return out;
}

Eigen::RowVectorXd mutate_row(const TabularDataset& ds, std::size_t parent, std::size_t c1, std::size_t c2,
                              const BalancerConfig& cfg, Rng& rng) {
    const auto p = static_cast<Eigen::Index>(parent);
    Eigen::RowVectorXd row = ds.features.row(p);
    for (std::size_t f = 0; f < ds.cols(); ++f) {
        if (f == ds.protected_column) continue;
        const auto col = static_cast<Eigen::Index>(f);
        const bool crossover = cfg.cr > uniform01(rng);
        if (!crossover) continue;
        if (is_code_column(ds, f)) {
            row(col) = ds.features(static_cast<Eigen::Index>(c1), col);
        } else {
            const double v = mutation_value(row(col), ds.features(static_cast<Eigen::Index>(c1), col),
                                            ds.features(static_cast<Eigen::Index>(c2), col), cfg.f);
            row(col) = std::clamp(v, 0.0, 1.0);
        }
    }
    return row;
}

BalanceResult fair_smote_balance(const TabularDataset& ds, const BalancerConfig& cfg) {
    cfg.validate();
    BalanceResult result;
    result.before = group_counts(ds);
    const std::size_t max_size = result.before.max_size();
    auto groups = rows_by_group(ds);

    for (GroupTag g : kAllGroups) {
        const auto gi = static_cast<std::size_t>(g);
        if (groups[gi].empty()) throw DataError(std::string("cannot balance: group ") + to_string(g) + " is empty");
        result.generated[gi] = max_size - groups[gi].size();
        if (result.generated[gi] > 0 && groups[gi].size() < 3) {
            throw DataError(std::string("cannot balance: group ") + to_string(g) + " has " +
                            std::to_string(groups[gi].size()) +
                            " rows but needs at least 3 (a parent and two neighbors); label more rows of this group "
                            "or lower the selection threshold");
        }
    }

    std::size_t total_new = 0;
    for (std::size_t n : result.generated) total_new += n;
    if (total_new == 0) {
        result.data = ds;
        return result;
    }

    Eigen::MatrixXd synthetic(static_cast<Eigen::Index>(total_new), ds.features.cols());
    Eigen::VectorXd synthetic_labels(static_cast<Eigen::Index>(total_new));
    result.provenance.reserve(total_new);
    Eigen::Index out = 0;

    for (GroupTag g : kAllGroups) {
        const auto gi = static_cast<std::size_t>(g);
        if (result.generated[gi] == 0) continue;
        const auto& rows = groups[gi];  // ascending, so local ties follow row order
        const NeighborIndex index = subgroup_index(ds, rows);
        std::unordered_map<std::size_t, std::pair<std::size_t, std::size_t>> neighbor_cache;
        Rng rng(derive_seed(cfg.seed, {gi}));
        for (std::size_t n = 0; n < result.generated[gi]; ++n) {
            const std::size_t local = uniform_index(rng, rows.size());
            auto it = neighbor_cache.find(local);
            if (it == neighbor_cache.end()) {
                const auto nbs = index.query_point(local, 2);
                it = neighbor_cache.emplace(local, std::make_pair(rows[nbs[0].index], rows[nbs[1].index])).first;
            }
            const std::size_t parent = rows[local];
            const auto [c1, c2] = it->second;
            synthetic.row(out) = mutate_row(ds, parent, c1, c2, cfg, rng);
            synthetic_labels(out) = ds.labels(static_cast<Eigen::Index>(parent));
            result.provenance.push_back({g, parent, c1, c2});
            ++out;
        }
    }

    result.data = ds;
    const Eigen::Index n0 = ds.features.rows();
    result.data.features.conservativeResize(n0 + out, Eigen::NoChange);
    result.data.features.bottomRows(out) = synthetic;
    result.data.labels.conservativeResize(n0 + out);
    result.data.labels.tail(out) = synthetic_labels;
    result.data.row_ids.resize(static_cast<std::size_t>(n0 + out), TabularDataset::kSyntheticRow);
    return result;
}

void write_synthetic_audit(const std::filesystem::path& path, const BalanceResult& result) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    const TabularDataset& ds = result.data;
    const std::size_t first = ds.rows() - result.provenance.size();
    out.precision(17);
    out << "group,parent_row_id,neighbor1_row_id,neighbor2_row_id";
    for (const auto& c : ds.feature_schema) out << ',' << format_csv_cell(c.name);
    out << ',' << format_csv_cell(ds.label_schema.name) << '\n';
    for (std::size_t k = 0; k < result.provenance.size(); ++k) {
        const auto& p = result.provenance[k];
        out << to_string(p.group) << ',' << ds.row_ids[p.parent] << ',' << ds.row_ids[p.c1] << ',' << ds.row_ids[p.c2];
        const auto r = static_cast<Eigen::Index>(first + k);
        for (Eigen::Index c = 0; c < ds.features.cols(); ++c) out << ',' << ds.features(r, c);
        out << ',' << ds.label(first + k) << '\n';
    }
}

}  // namespace fairssl
