#pragma once

#include "fairssl/dataset.hpp"
#include "fairssl/learners.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

namespace fairssl {

enum class LabelState : std::uint8_t { unlabeled, ground_truth, pseudo };

enum class LabelSource : std::uint8_t {
    none,
    ground_truth,
    self_training,
    label_propagation,
    label_spreading,
    co_training,
};

std::string_view to_string(LabelSource s) noexcept;

struct LabelEntry {
    LabelState state = LabelState::unlabeled;
    int label = -1;
    double confidence = 0.0;
    LabelSource source = LabelSource::none;
    int iteration = -1;

    bool operator==(const LabelEntry&) const = default;
};

/// Label state for each row of one training set: D_l is every row that is not
/// unlabeled, D_u the rest. Ground-truth entries are write-once.
class PartialLabels {
public:
    PartialLabels() = default;
    explicit PartialLabels(std::size_t rows) : entries_(rows) {}

    std::size_t size() const noexcept { return entries_.size(); }
    const LabelEntry& operator[](std::size_t row) const { return entries_.at(row); }
    const std::vector<LabelEntry>& entries() const noexcept { return entries_; }

    void set_ground_truth(std::size_t row, int label);
    /// Throws DataError if the row is already labeled.
    void set_pseudo(std::size_t row, int label, double confidence, LabelSource source, int iteration);

    bool is_labeled(std::size_t row) const { return entries_.at(row).state != LabelState::unlabeled; }
    std::vector<std::size_t> labeled_rows() const;
    std::vector<std::size_t> unlabeled_rows() const;
    std::size_t count(LabelState state) const;
    /// Labels of the labeled rows, aligned with labeled_rows().
    Eigen::VectorXd labeled_targets() const;

    bool operator==(const PartialLabels&) const = default;

private:
    std::vector<LabelEntry> entries_;
};

/// Copies `ds.features` without column `dropped`.
Eigen::MatrixXd features_without(const TabularDataset& ds, std::size_t dropped);

struct SituationTestResult {
    std::vector<std::size_t> kept;       // rows whose label both group models reproduce
    std::vector<std::size_t> discarded;  // rows whose label is dropped
    LogisticModel privileged_model;
    LogisticModel unprivileged_model;
    std::vector<int> pred_privileged;    // per row of train
    std::vector<int> pred_unprivileged;
};

/// Fits one logistic model per protected group on that group's rows, with the
/// active protected column removed from the features, and keeps a row only if
/// both models predict its recorded label. Throws DataError listing any empty
/// (group x class) cell.
SituationTestResult situation_test(const TabularDataset& train, std::uint64_t seed,
                                   const TrainingConfig& config = {});

void write_situation_audit(const std::filesystem::path& path, const TabularDataset& train,
                           const SituationTestResult& result);

struct InitialSelection {
    std::vector<std::size_t> initial;    // equal count from each GroupTag
    std::vector<std::size_t> remainder;  // every other training row
    std::size_t quota = 0;               // rows per group actually taken
    std::size_t requested_quota = 0;     // floor(round(fraction * |train|) / 4)
    PartialLabels labels;                // initial rows ground truth, everything else unlabeled
};

/// Draws floor(round(budget_fraction * |train|) / 4) rows per group from the
/// kept rows, uniformly without replacement. If a group has fewer kept rows
/// than the quota, every group's quota shrinks to that minimum.
InitialSelection sample_balanced_initial(const TabularDataset& train, const std::vector<std::size_t>& fair_labeled,
                                         double budget_fraction, std::uint64_t seed);

}  // namespace fairssl
