#pragma once

#include "fairssl/balancer.hpp"
#include "fairssl/dataset.hpp"
#include "fairssl/fair_labeling.hpp"
#include "fairssl/learners.hpp"
#include "fairssl/metrics.hpp"
#include "fairssl/ssl.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fairssl {

/// What a run trains: the plain learner, one Fair-SSL variant, or the variant
/// chosen per fold on a validation split.
enum class Variant : std::uint8_t { default_learner, self_training, label_propagation, label_spreading, co_training, best };

inline constexpr std::array<Variant, 5> kReportVariants{Variant::default_learner, Variant::self_training,
                                                        Variant::label_propagation, Variant::label_spreading,
                                                        Variant::co_training};

Variant parse_variant(const std::string& code);  // "default", "ST", "LP", "LS", "CT", "best"
const char* to_string(Variant v) noexcept;
Variant to_variant(SslVariant v) noexcept;
std::optional<SslVariant> ssl_variant(Variant v) noexcept;  // nullopt for default and best

struct SyntheticSpec {
    std::size_t n = 4000;
    double bias = 0.3;
    std::uint64_t seed = 7;

    bool operator==(const SyntheticSpec&) const = default;
};

inline constexpr const char* kSyntheticDataset = "synthetic";

struct ExperimentConfig {
    std::string name = "experiment";
    std::string dataset = kSyntheticDataset;  // CSV path, or "synthetic"
    std::string schema;                       // schema JSON path for CSV datasets
    SyntheticSpec synthetic;
    std::string protected_attr;  // empty: the schema's first protected attribute
    LearnerKind learner = LearnerKind::logistic;
    std::vector<Variant> variants{Variant::self_training};
    double labeled_fraction = 0.10;
    std::size_t folds = 5;
    std::size_t repeats = 10;
    std::uint64_t seed = 42;
    SSLConfig ssl;
    BalancerConfig balancer;
    TrainingConfig training;

    void validate() const;  // throws ConfigError
    bool operator==(const ExperimentConfig&) const = default;
};

/// Loads and encodes the configured dataset (not normalized).
TabularDataset load_dataset(const ExperimentConfig& cfg);

/// Per-fold min-max normalization: the scaler is fit on the training rows only.
struct FoldSplit {
    TabularDataset train;
    TabularDataset test;
};

FoldSplit make_fold(const TabularDataset& ds, std::span<const std::size_t> assignment, std::size_t fold);

/// Seed stages under (base, repeat, fold).
enum class Stage : std::uint64_t { folds = 0, situation = 1, initial = 2, ssl = 3, balance = 4, fit = 5, select = 6 };

std::uint64_t stage_seed(std::uint64_t base, std::size_t repeat, std::size_t fold, Stage stage);
/// Fold assignment depends only on (base, repeat).
std::uint64_t fold_seed(std::uint64_t base, std::size_t repeat);

/// Row ids that reached each training-side stage.
struct PipelineTrace {
    std::vector<std::int64_t> situation_rows;
    std::vector<std::int64_t> ssl_rows;
    std::vector<std::int64_t> balance_rows;
};

/// Situation testing plus the balanced initial sample; shared by every variant
/// of one fold.
struct FairSslPrep {
    SituationTestResult situation;
    InitialSelection selection;
};

FairSslPrep prepare_fair_ssl(const TabularDataset& train, const ExperimentConfig& cfg, std::uint64_t situation_seed,
                             std::uint64_t initial_seed, PipelineTrace* trace = nullptr);

struct VariantOutcome {
    std::unique_ptr<Classifier> model;
    double pseudo_label_seconds = 0.0;
    double pipeline_seconds = 0.0;  // pseudo-labeling + balancing + fitting
    std::size_t pseudo_labeled = 0;
    std::size_t synthetic_rows = 0;
};

/// pseudo_label -> fair_smote_balance on the labeled rows -> fit learner.
VariantOutcome train_fair_ssl(const TabularDataset& train, const FairSslPrep& prep, SslVariant variant,
                              const ExperimentConfig& cfg, std::uint64_t ssl_seed, std::uint64_t balance_seed,
                              std::uint64_t fit_seed, PipelineTrace* trace = nullptr);

std::unique_ptr<Classifier> train_default(const TabularDataset& train, const ExperimentConfig& cfg,
                                          std::uint64_t fit_seed);

MetricRecord score(const Classifier& model, const TabularDataset& test);

/// Validation score used to pick a variant: F1 minus the mean of the four
/// reported fairness values (an undefined value counts as 1).
double selection_score(const MetricRecord& r);

struct VariantSelection {
    SslVariant chosen = SslVariant::self_training;
    std::array<double, 4> scores{};  // indexed like kAllSslVariants
};

/// Inner 80/20 split of the training fold; every variant is trained on the
/// inner part and scored on the validation part. Ties go to the earlier of
/// ST, LP, LS, CT.
VariantSelection select_best_variant(const TabularDataset& train, const ExperimentConfig& cfg, std::uint64_t seed);

struct FoldRecord {
    Variant variant = Variant::default_learner;
    std::optional<SslVariant> chosen;  // set for Variant::best
    std::size_t repeat = 0;
    std::size_t fold = 0;
    MetricRecord metrics;
    double pseudo_label_seconds = 0.0;
    double pipeline_seconds = 0.0;
    std::size_t pseudo_labeled = 0;
    std::size_t synthetic_rows = 0;
};

struct VariantSummary {
    Variant variant = Variant::default_learner;
    MetricRecord medians;
    std::size_t records = 0;
};

struct EvalReport {
    ExperimentConfig config;
    std::vector<FoldRecord> records;  // ordered by (variant, repeat, fold)
    std::vector<VariantSummary> summaries;
    double runtime_seconds = 0.0;

    std::vector<const FoldRecord*> records_for(Variant v) const;
    const VariantSummary& summary(Variant v) const;  // throws Error if absent
    /// Sum of per-fold pipeline seconds for one variant.
    double pipeline_seconds(Variant v) const;
};

struct RunOptions {
    std::size_t threads = 0;  // 0: FAIRSSL_THREADS, else hardware concurrency
    // One entry per (repeat, fold) cell, in cell order.
    std::vector<std::vector<std::int64_t>>* test_rows = nullptr;  // test-fold row ids
    std::vector<PipelineTrace>* traces = nullptr;
};

/// folds x repeats cells for every configured variant. Cells run concurrently
/// and merge by (repeat, fold); the result does not depend on thread count.
EvalReport repeat_cv(const ExperimentConfig& cfg, const RunOptions& options = {});
EvalReport repeat_cv(const TabularDataset& ds, const ExperimentConfig& cfg, const RunOptions& options = {});

/// repeat_cv restricted to the default learner / one Fair-SSL variant.
EvalReport run_default(const ExperimentConfig& cfg, const RunOptions& options = {});
EvalReport run_fair_ssl(const ExperimentConfig& cfg, const RunOptions& options = {});

std::size_t configured_threads();

struct SweepRow {
    double labeled_fraction = 0.0;
    EvalReport report;
};

/// One run per distinct fraction (first occurrence order kept), each using the
/// configured variants.
std::vector<SweepRow> sweep_labeled_fraction(const ExperimentConfig& cfg, std::span<const double> fractions,
                                             const RunOptions& options = {});

std::vector<double> dedupe_fractions(std::span<const double> fractions);

}  // namespace fairssl
