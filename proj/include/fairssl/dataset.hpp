#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace fairssl {

enum class ColumnKind { numeric, binary, categorical };
enum class ColumnRole { feature, class_label, protected_attr };

struct ColumnSchema {
    std::string name;
    ColumnKind kind = ColumnKind::numeric;
    ColumnRole role = ColumnRole::feature;

    bool operator==(const ColumnSchema&) const = default;
};

struct ProtectedSpec {
    std::string column;
    std::string privileged_value;  // raw value mapped to 1; everything else maps to 0

    bool operator==(const ProtectedSpec&) const = default;
};

/// Parsed schema file: columns, every protected attribute, favorable class value.
struct DatasetSchema {
    std::vector<ColumnSchema> columns;
    std::vector<ProtectedSpec> protected_attrs;
    std::string favorable_value;

    /// Throws SchemaError unless there is exactly one class column, at least one
    /// protected column with a ProtectedSpec, and column names are unique.
    void validate() const;
    const ProtectedSpec& protected_spec(const std::string& column) const;
};

DatasetSchema load_schema_json(const std::filesystem::path& path);
DatasetSchema parse_schema_json(const std::string& text);
std::string schema_to_json(const DatasetSchema& schema);

/// Favorable/unfavorable crossed with privileged/unprivileged.
enum class GroupTag : std::uint8_t { FP = 0, FU = 1, UP = 2, UU = 3 };

inline constexpr std::array<GroupTag, 4> kAllGroups{GroupTag::FP, GroupTag::FU, GroupTag::UP,
                                                    GroupTag::UU};

constexpr GroupTag group_of(int label, int protected_value) noexcept {
    if (label == 1) return protected_value == 1 ? GroupTag::FP : GroupTag::FU;
    return protected_value == 1 ? GroupTag::UP : GroupTag::UU;
}

constexpr int group_label(GroupTag g) noexcept {
    return g == GroupTag::FP || g == GroupTag::FU ? 1 : 0;
}

constexpr int group_protected(GroupTag g) noexcept {
    return g == GroupTag::FP || g == GroupTag::UP ? 1 : 0;
}

const char* to_string(GroupTag g) noexcept;

/// First-appearance integer coding of string values.
class CategoryEncoder {
public:
    CategoryEncoder() = default;
    explicit CategoryEncoder(std::vector<std::string> categories);

    /// Learns codes from values in order of first appearance.
    static CategoryEncoder fit(std::span<const std::string> values);

    int transform(const std::string& value) const;  // throws EncodingError on unseen value
    std::vector<int> transform(std::span<const std::string> values) const;
    const std::string& decode(int code) const;

    std::size_t size() const noexcept { return categories_.size(); }
    const std::vector<std::string>& categories() const noexcept { return categories_; }

    bool operator==(const CategoryEncoder& other) const { return categories_ == other.categories_; }

private:
    std::vector<std::string> categories_;
    std::unordered_map<std::string, int> index_;
};

/// Per-column min/max learned on one dataset, reusable on others (test folds).
struct MinMaxScaler {
    std::vector<std::size_t> columns;
    std::vector<double> min;
    std::vector<double> max;

    bool operator==(const MinMaxScaler&) const = default;
};

/// Encoded, immutable-by-convention tabular data.
///
/// `features` holds every non-class column (protected attributes included) in
/// schema order. `labels` holds 1 for the favorable class. Every protected
/// column is coded 1 = privileged. `row_ids` tracks provenance back to the
/// source rows; synthetic rows carry kSyntheticRow.
struct TabularDataset {
    static constexpr std::int64_t kSyntheticRow = -1;

    std::vector<ColumnSchema> feature_schema;
    ColumnSchema label_schema;
    Eigen::MatrixXd features;
    Eigen::VectorXd labels;
    std::vector<std::int64_t> row_ids;
    std::size_t protected_column = 0;  // index into features of the active protected attribute
    ProtectedSpec protected_spec;
    std::string favorable_value;
    std::vector<std::optional<CategoryEncoder>> encoders;  // per feature column
    CategoryEncoder label_encoder;                          // {unfavorable, favorable}
    std::optional<MinMaxScaler> scaler;
    std::size_t dropped_rows = 0;

    std::size_t rows() const noexcept { return static_cast<std::size_t>(features.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(features.cols()); }

    int label(std::size_t row) const { return labels(static_cast<Eigen::Index>(row)) > 0.5 ? 1 : 0; }
    int protected_value(std::size_t row) const {
        return features(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(protected_column)) > 0.5
                   ? 1
                   : 0;
    }
    GroupTag group(std::size_t row) const { return group_of(label(row), protected_value(row)); }

    std::vector<int> label_vector() const;
    std::vector<int> protected_vector() const;
    std::size_t feature_index(const std::string& name) const;  // throws SchemaError

    /// Rows in the given order (duplicates allowed); keeps schema, encoders, scaler.
    TabularDataset subset(std::span<const std::size_t> rows) const;
    /// Rows of `other` appended; schemas must match.
    TabularDataset concat(const TabularDataset& other) const;
    /// Same data, different active protected attribute.
    TabularDataset with_protected(const ProtectedSpec& spec) const;
};

/// Raw CSV contents before encoding.
struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// RFC 4180 reader: comma delimiter, double-quote quoting, first row is the header.
RawTable read_csv(const std::filesystem::path& path);
RawTable parse_csv(const std::string& text);
void write_csv(const std::filesystem::path& path, const RawTable& table);
std::string format_csv_cell(const std::string& cell);

/// Encodes a raw table against a schema. Rows with an empty or "?" cell in any
/// schema column are dropped and counted in dropped_rows; columns not named by
/// the schema are ignored. `active_protected` selects the protected attribute
/// (defaults to the schema's first).
TabularDataset encode_table(const RawTable& raw, const DatasetSchema& schema,
                            const std::string& active_protected = {});

TabularDataset load_csv(const std::filesystem::path& path, const DatasetSchema& schema,
                        const std::string& active_protected = {});

/// Inverse of encode_table for the columns it kept; synthetic numeric values are
/// written with full precision.
RawTable decode_table(const TabularDataset& ds);

/// Re-encodes every categorical column through its stored encoder after
/// decoding. Columns that are already numeric pass through unchanged.
TabularDataset encode_categorical(const TabularDataset& ds);

MinMaxScaler fit_min_max(const TabularDataset& ds);
TabularDataset apply_min_max(const TabularDataset& ds, const MinMaxScaler& scaler);

/// Fits a min-max scaler on the numeric feature columns and applies it. The
/// scaler is kept on the result for reuse on held-out data.
TabularDataset normalize_numeric(const TabularDataset& ds);

struct TrainTestSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Stratified on GroupTag; each group contributes round(size * test_fraction)
/// rows to the test side. Deterministic given seed.
TrainTestSplit split_train_test(const TabularDataset& ds, double test_fraction, std::uint64_t seed);

/// Stratified k-fold assignment: fold id per row. Each group is shuffled and
/// dealt round-robin, so group proportions differ by at most one row per fold.
std::vector<std::size_t> stratified_folds(const TabularDataset& ds, std::size_t folds, std::uint64_t seed);

std::array<std::vector<std::size_t>, 4> rows_by_group(const TabularDataset& ds);

/// Two numeric features in [0,1] and one binary protected attribute. The
/// favorable rate among privileged rows exceeds the unprivileged rate by
/// bias_strength (up to clipping at [0,1]).
TabularDataset synth_biased_dataset(std::size_t n, double bias_strength, std::uint64_t seed);

/// The fixed schema synth_biased_dataset rows decode against.
DatasetSchema synthetic_schema();

}  // namespace fairssl
