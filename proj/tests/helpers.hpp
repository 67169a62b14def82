#pragma once

#include "fairssl/dataset.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace fairssl::testing {

/// Numeric feature columns plus a binary protected column appended last.
inline TabularDataset make_dataset(const Eigen::MatrixXd& x, const std::vector<int>& labels,
                                   const std::vector<int>& protected_values) {
    TabularDataset ds;
    const auto n = x.rows();
    const auto d = x.cols();
    ds.features.resize(n, d + 1);
    ds.features.leftCols(d) = x;
    ds.labels.resize(n);
    ds.row_ids.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        ds.features(i, d) = protected_values[static_cast<std::size_t>(i)];
        ds.labels(i) = labels[static_cast<std::size_t>(i)];
        ds.row_ids[static_cast<std::size_t>(i)] = i;
    }
    for (Eigen::Index j = 0; j < d; ++j) {
        ds.feature_schema.push_back({"x" + std::to_string(j), ColumnKind::numeric, ColumnRole::feature});
    }
    ds.feature_schema.push_back({"pa", ColumnKind::binary, ColumnRole::protected_attr});
    ds.encoders.resize(static_cast<std::size_t>(d + 1));
    ds.encoders.back() = CategoryEncoder({"other", "priv"});
    ds.label_schema = {"y", ColumnKind::binary, ColumnRole::class_label};
    ds.label_encoder = CategoryEncoder({"neg", "pos"});
    ds.protected_column = static_cast<std::size_t>(d);
    ds.protected_spec = {"pa", "priv"};
    ds.favorable_value = "pos";
    return ds;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("fairssl_" + tag + "_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace fairssl::testing
