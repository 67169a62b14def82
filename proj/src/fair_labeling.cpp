#include "fairssl/fair_labeling.hpp"

#include "fairssl/error.hpp"
#include "fairssl/random.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace fairssl {

std::string_view to_string(LabelSource s) noexcept {
    switch (s) {
        case LabelSource::none: return "none";
        case LabelSource::ground_truth: return "ground_truth";
        case LabelSource::self_training: return "ST";
        case LabelSource::label_propagation: return "LP";
        case LabelSource::label_spreading: return "LS";
        case LabelSource::co_training: return "CT";
    }
    return "none";
}

void PartialLabels::set_ground_truth(std::size_t row, int label) {
    LabelEntry& e = entries_.at(row);
    if (e.state != LabelState::unlabeled) throw DataError("row " + std::to_string(row) + " is already labeled");
    e = LabelEntry{LabelState::ground_truth, label, 1.0, LabelSource::ground_truth, 0};
}

void PartialLabels::set_pseudo(std::size_t row, int label, double confidence, LabelSource source, int iteration) {
    LabelEntry& e = entries_.at(row);
    if (e.state != LabelState::unlabeled) throw DataError("row " + std::to_string(row) + " is already labeled");
    if (label != 0 && label != 1) throw DataError("pseudo label must be 0 or 1");
    e = LabelEntry{LabelState::pseudo, label, confidence, source, iteration};
}

std::vector<std::size_t> PartialLabels::labeled_rows() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].state != LabelState::unlabeled) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> PartialLabels::unlabeled_rows() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].state == LabelState::unlabeled) out.push_back(i);
    }
    return out;
}

std::size_t PartialLabels::count(LabelState state) const {
    return static_cast<std::size_t>(
        std::count_if(entries_.begin(), entries_.end(), [&](const LabelEntry& e) { return e.state == state; }));
}

Eigen::VectorXd PartialLabels::labeled_targets() const {
    const auto rows = labeled_rows();
    Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) y(static_cast<Eigen::Index>(i)) = entries_[rows[i]].label;
    return y;
}

Eigen::MatrixXd features_without(const TabularDataset& ds, std::size_t dropped) {
    const Eigen::Index d = ds.features.cols();
    const auto k = static_cast<Eigen::Index>(dropped);
    Eigen::MatrixXd out(ds.features.rows(), d - 1);
    out.leftCols(k) = ds.features.leftCols(k);
    out.rightCols(d - k - 1) = ds.features.rightCols(d - k - 1);
    return out;
}

SituationTestResult situation_test(const TabularDataset& train, std::uint64_t seed, const TrainingConfig& config) {
    auto groups = rows_by_group(train);
    std::string empty_cells;
    for (GroupTag g : kAllGroups) {
        if (groups[static_cast<std::size_t>(g)].empty()) {
            if (!empty_cells.empty()) empty_cells += ", ";
            empty_cells += to_string(g);
        }
    }
    if (!empty_cells.empty()) throw DataError("situation testing needs every (class x group) cell; empty: " + empty_cells);

    const Eigen::MatrixXd x = features_without(train, train.protected_column);
    std::vector<std::size_t> priv_rows;
    std::vector<std::size_t> unpriv_rows;
    for (std::size_t i = 0; i < train.rows(); ++i) (train.protected_value(i) ? priv_rows : unpriv_rows).push_back(i);

    auto fit_on = [&](const std::vector<std::size_t>& rows, std::uint64_t stage) {
        Eigen::MatrixXd xs(static_cast<Eigen::Index>(rows.size()), x.cols());
        Eigen::VectorXd ys(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            xs.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
            ys(static_cast<Eigen::Index>(i)) = train.labels(static_cast<Eigen::Index>(rows[i]));
        }
        TrainingConfig cfg = config;
        cfg.seed = derive_seed(seed, {stage});
        return fit_logistic(xs, ys, cfg);
    };

    SituationTestResult result;
    result.privileged_model = fit_on(priv_rows, 1);
    result.unprivileged_model = fit_on(unpriv_rows, 0);
    result.pred_privileged = result.privileged_model.predict(x);
    result.pred_unprivileged = result.unprivileged_model.predict(x);
    for (std::size_t i = 0; i < train.rows(); ++i) {
        const int truth = train.label(i);
        if (result.pred_privileged[i] == truth && result.pred_unprivileged[i] == truth) {
            result.kept.push_back(i);
        } else {
            result.discarded.push_back(i);
        }
    }
    return result;
}

void write_situation_audit(const std::filesystem::path& path, const TabularDataset& train,
                           const SituationTestResult& result) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    std::vector<bool> kept(train.rows(), false);
    for (std::size_t r : result.kept) kept[r] = true;
    out << "row_id,group_model_pred_privileged,group_model_pred_unprivileged,truth,kept\n";
    for (std::size_t i = 0; i < train.rows(); ++i) {
        out << train.row_ids[i] << ',' << result.pred_privileged[i] << ',' << result.pred_unprivileged[i] << ','
            << train.label(i) << ',' << (kept[i] ? 1 : 0) << '\n';
    }
}

InitialSelection sample_balanced_initial(const TabularDataset& train, const std::vector<std::size_t>& fair_labeled,
                                         double budget_fraction, std::uint64_t seed) {
    if (!(budget_fraction > 0.0 && budget_fraction <= 1.0)) throw ConfigError("labeled fraction must lie in (0, 1]");

    std::array<std::vector<std::size_t>, 4> pools;
    for (std::size_t r : fair_labeled) pools[static_cast<std::size_t>(train.group(r))].push_back(r);
    for (GroupTag g : kAllGroups) {
        if (pools[static_cast<std::size_t>(g)].empty()) {
            throw DataError(std::string("no fairly labeled rows in group ") + to_string(g));
        }
    }

    InitialSelection sel;
    const auto target = static_cast<std::size_t>(std::llround(budget_fraction * static_cast<double>(train.rows())));
    sel.requested_quota = target / 4;
    std::size_t available = pools[0].size();
    for (const auto& p : pools) available = std::min(available, p.size());
    sel.quota = std::min(sel.requested_quota, available);
    if (sel.quota < sel.requested_quota) {
        warn("initial labeled quota shrunk from " + std::to_string(sel.requested_quota) + " to " +
             std::to_string(sel.quota) + " rows per group");
    }
    if (sel.quota == 0) throw DataError("labeled budget is too small to take one row per group");

    Rng rng(seed);
    for (auto& pool : pools) {
        std::sort(pool.begin(), pool.end());
        shuffle(pool, rng);
        sel.initial.insert(sel.initial.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(sel.quota));
    }
    std::sort(sel.initial.begin(), sel.initial.end());

    sel.labels = PartialLabels(train.rows());
    for (std::size_t r : sel.initial) sel.labels.set_ground_truth(r, train.label(r));
    sel.remainder = sel.labels.unlabeled_rows();
    return sel;
}

}  // namespace fairssl
