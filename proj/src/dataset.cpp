#include "fairssl/dataset.hpp"

#include "fairssl/error.hpp"
#include "fairssl/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace fairssl {

using json = nlohmann::json;

namespace {

ColumnKind parse_kind(const std::string& s) {
    if (s == "numeric") return ColumnKind::numeric;
    if (s == "binary") return ColumnKind::binary;
    if (s == "categorical") return ColumnKind::categorical;
    throw SchemaError("unknown column kind '" + s + "'");
}

ColumnRole parse_role(const std::string& s) {
    if (s == "feature") return ColumnRole::feature;
    if (s == "class_label") return ColumnRole::class_label;
    if (s == "protected") return ColumnRole::protected_attr;
    throw SchemaError("unknown column role '" + s + "'");
}

const char* kind_name(ColumnKind k) {
    switch (k) {
        case ColumnKind::numeric: return "numeric";
        case ColumnKind::binary: return "binary";
        case ColumnKind::categorical: return "categorical";
    }
    return "numeric";
}

const char* role_name(ColumnRole r) {
    switch (r) {
        case ColumnRole::feature: return "feature";
        case ColumnRole::class_label: return "class_label";
        case ColumnRole::protected_attr: return "protected";
    }
    return "feature";
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "?"; }

double parse_double(const std::string& cell, const std::string& column) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    while (first < last && *first == ' ') ++first;
    while (last > first && last[-1] == ' ') --last;
    if (first < last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        throw EncodingError("column '" + column + "': '" + cell + "' is not numeric");
    }
    return value;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

// Two-category encoder {other, designated}: designated value maps to 1.
CategoryEncoder designated_encoder(const std::vector<std::string>& column_values,
                                   const std::string& designated, const std::string& column) {
    std::vector<std::string> distinct;
    for (const auto& v : column_values) {
        if (std::find(distinct.begin(), distinct.end(), v) == distinct.end()) distinct.push_back(v);
    }
    if (distinct.size() > 2) {
        throw EncodingError("column '" + column + "' must be binary but has " +
                            std::to_string(distinct.size()) + " distinct values");
    }
    std::string other = "non-" + designated;
    for (const auto& v : distinct) {
        if (v != designated) other = v;
    }
    return CategoryEncoder({other, designated});
}

}  // namespace

const char* to_string(GroupTag g) noexcept {
    switch (g) {
        case GroupTag::FP: return "FP";
        case GroupTag::FU: return "FU";
        case GroupTag::UP: return "UP";
        case GroupTag::UU: return "UU";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Schema

void DatasetSchema::validate() const {
    std::unordered_set<std::string> names;
    std::size_t class_cols = 0;
    std::size_t protected_cols = 0;
    for (const auto& c : columns) {
        if (c.name.empty()) throw SchemaError("column with empty name");
        if (!names.insert(c.name).second) throw SchemaError("duplicate column name '" + c.name + "'");
        if (c.role == ColumnRole::class_label) ++class_cols;
        if (c.role == ColumnRole::protected_attr) ++protected_cols;
    }
    if (class_cols != 1) {
        throw SchemaError("schema needs exactly one class_label column, found " + std::to_string(class_cols));
    }
    if (protected_cols == 0) throw SchemaError("schema needs at least one protected column");
    for (const auto& c : columns) {
        if (c.role != ColumnRole::protected_attr) continue;
        bool found = std::any_of(protected_attrs.begin(), protected_attrs.end(),
                                 [&](const ProtectedSpec& p) { return p.column == c.name; });
        if (!found) throw SchemaError("protected column '" + c.name + "' has no privileged_value");
    }
    for (const auto& p : protected_attrs) {
        auto it = std::find_if(columns.begin(), columns.end(),
                               [&](const ColumnSchema& c) { return c.name == p.column; });
        if (it == columns.end() || it->role != ColumnRole::protected_attr) {
            throw SchemaError("protected spec names '" + p.column + "', which is not a protected column");
        }
    }
    if (favorable_value.empty()) throw SchemaError("favorable_value is required");
}

const ProtectedSpec& DatasetSchema::protected_spec(const std::string& column) const {
    if (column.empty()) {
        if (protected_attrs.empty()) throw SchemaError("schema has no protected attribute");
        return protected_attrs.front();
    }
    for (const auto& p : protected_attrs) {
        if (p.column == column) return p;
    }
    throw SchemaError("'" + column + "' is not a protected attribute of this schema");
}

DatasetSchema parse_schema_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("schema is not valid JSON: ") + e.what());
    }
    DatasetSchema schema;
    try {
        for (const auto& c : j.at("columns")) {
            schema.columns.push_back({c.at("name").get<std::string>(), parse_kind(c.at("kind").get<std::string>()),
                                      parse_role(c.at("role").get<std::string>())});
        }
        auto read_spec = [&](const json& p) {
            schema.protected_attrs.push_back(
                {p.at("column").get<std::string>(), p.at("privileged_value").get<std::string>()});
        };
        const json& prot = j.at("protected");
        if (prot.is_array()) {
            for (const auto& p : prot) read_spec(p);
        } else {
            read_spec(prot);
        }
        schema.favorable_value = j.at("favorable_value").get<std::string>();
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed schema: ") + e.what());
    }
    schema.validate();
    return schema;
}

DatasetSchema load_schema_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open schema file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_schema_json(ss.str());
}

std::string schema_to_json(const DatasetSchema& schema) {
    json j;
    j["columns"] = json::array();
    for (const auto& c : schema.columns) {
        j["columns"].push_back({{"name", c.name}, {"kind", kind_name(c.kind)}, {"role", role_name(c.role)}});
    }
    json prot = json::array();
    for (const auto& p : schema.protected_attrs) {
        prot.push_back({{"column", p.column}, {"privileged_value", p.privileged_value}});
    }
    j["protected"] = prot.size() == 1 ? prot[0] : prot;
    j["favorable_value"] = schema.favorable_value;
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// CategoryEncoder

CategoryEncoder::CategoryEncoder(std::vector<std::string> categories) : categories_(std::move(categories)) {
    for (std::size_t i = 0; i < categories_.size(); ++i) {
        if (!index_.emplace(categories_[i], static_cast<int>(i)).second) {
            throw EncodingError("duplicate category '" + categories_[i] + "'");
        }
    }
}

CategoryEncoder CategoryEncoder::fit(std::span<const std::string> values) {
    std::vector<std::string> cats;
    std::unordered_set<std::string> seen;
    for (const auto& v : values) {
        if (seen.insert(v).second) cats.push_back(v);
    }
    return CategoryEncoder(std::move(cats));
}

int CategoryEncoder::transform(const std::string& value) const {
    auto it = index_.find(value);
    if (it == index_.end()) throw EncodingError("unseen category '" + value + "'");
    return it->second;
}

std::vector<int> CategoryEncoder::transform(std::span<const std::string> values) const {
    std::vector<int> out;
    out.reserve(values.size());
    for (const auto& v : values) out.push_back(transform(v));
    return out;
}

const std::string& CategoryEncoder::decode(int code) const {
    if (code < 0 || static_cast<std::size_t>(code) >= categories_.size()) {
        throw EncodingError("code " + std::to_string(code) + " out of range");
    }
    return categories_[static_cast<std::size_t>(code)];
}

// ---------------------------------------------------------------------------
// TabularDataset

std::vector<int> TabularDataset::label_vector() const {
    std::vector<int> out(rows());
    for (std::size_t i = 0; i < rows(); ++i) out[i] = label(i);
    return out;
}

std::vector<int> TabularDataset::protected_vector() const {
    std::vector<int> out(rows());
    for (std::size_t i = 0; i < rows(); ++i) out[i] = protected_value(i);
    return out;
}

std::size_t TabularDataset::feature_index(const std::string& name) const {
    for (std::size_t i = 0; i < feature_schema.size(); ++i) {
        if (feature_schema[i].name == name) return i;
    }
    throw SchemaError("no feature column named '" + name + "'");
}

TabularDataset TabularDataset::subset(std::span<const std::size_t> rows_to_keep) const {
    TabularDataset out;
    out.feature_schema = feature_schema;
    out.label_schema = label_schema;
    out.protected_column = protected_column;
    out.protected_spec = protected_spec;
    out.favorable_value = favorable_value;
    out.encoders = encoders;
    out.label_encoder = label_encoder;
    out.scaler = scaler;
    const auto n = static_cast<Eigen::Index>(rows_to_keep.size());
    out.features.resize(n, features.cols());
    out.labels.resize(n);
    out.row_ids.resize(rows_to_keep.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto src = static_cast<Eigen::Index>(rows_to_keep[static_cast<std::size_t>(i)]);
        if (src >= features.rows()) throw DataError("subset row index out of range");
        out.features.row(i) = features.row(src);
        out.labels(i) = labels(src);
        out.row_ids[static_cast<std::size_t>(i)] = row_ids[static_cast<std::size_t>(src)];
    }
    return out;
}

TabularDataset TabularDataset::concat(const TabularDataset& other) const {
    if (other.feature_schema != feature_schema || other.protected_column != protected_column) {
        throw SchemaError("cannot concatenate datasets with different schemas");
    }
    TabularDataset out = *this;
    const Eigen::Index n = features.rows();
    const Eigen::Index m = other.features.rows();
    out.features.resize(n + m, features.cols());
    out.features.topRows(n) = features;
    out.features.bottomRows(m) = other.features;
    out.labels.resize(n + m);
    out.labels.head(n) = labels;
    out.labels.tail(m) = other.labels;
    out.row_ids.insert(out.row_ids.end(), other.row_ids.begin(), other.row_ids.end());
    return out;
}

TabularDataset TabularDataset::with_protected(const ProtectedSpec& spec) const {
    const std::size_t col = feature_index(spec.column);
    if (feature_schema[col].role != ColumnRole::protected_attr) {
        throw SchemaError("'" + spec.column + "' is not a protected column");
    }
    TabularDataset out = *this;
    out.protected_column = col;
    out.protected_spec = spec;
    const auto& enc = encoders[col];
    if (enc && enc->size() == 2 && enc->decode(1) != spec.privileged_value) {
        // Recode against the new privileged value.
        for (Eigen::Index i = 0; i < out.features.rows(); ++i) {
            const auto code = static_cast<int>(std::lround(out.features(i, static_cast<Eigen::Index>(col))));
            out.features(i, static_cast<Eigen::Index>(col)) = enc->decode(code) == spec.privileged_value ? 1.0 : 0.0;
        }
        out.encoders[col] = CategoryEncoder({enc->decode(1), spec.privileged_value});
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV

RawTable parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string cell;
    bool in_quotes = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cell.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"': in_quotes = true; any = true; break;
            case ',':
                record.push_back(std::move(cell));
                cell.clear();
                any = true;
                break;
            case '\r': break;
            case '\n':
                if (any || !cell.empty()) {
                    record.push_back(std::move(cell));
                    records.push_back(std::move(record));
                }
                record.clear();
                cell.clear();
                any = false;
                break;
            default:
                cell.push_back(ch);
                any = true;
        }
    }
    if (in_quotes) throw SchemaError("unterminated quoted CSV field");
    if (any || !cell.empty()) {
        record.push_back(std::move(cell));
        records.push_back(std::move(record));
    }
    RawTable table;
    if (records.empty()) throw SchemaError("CSV has no header row");
    table.header = std::move(records.front());
    if (!table.header.empty() && table.header[0].rfind("\xEF\xBB\xBF", 0) == 0) table.header[0].erase(0, 3);
    table.rows.assign(std::make_move_iterator(records.begin() + 1), std::make_move_iterator(records.end()));
    return table;
}

RawTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open CSV file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str());
}

std::string format_csv_cell(const std::string& cell) {
    if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
    std::string out = "\"";
    for (char ch : cell) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

void write_csv(const std::filesystem::path& path, const RawTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    auto write_row = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_csv_cell(row[i]);
        }
        out << '\n';
    };
    write_row(table.header);
    for (const auto& r : table.rows) write_row(r);
}

// ---------------------------------------------------------------------------
// Encoding

TabularDataset encode_table(const RawTable& raw, const DatasetSchema& schema, const std::string& active_protected) {
    schema.validate();
    const ProtectedSpec& active = schema.protected_spec(active_protected);

    std::vector<std::size_t> source(schema.columns.size());
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        auto it = std::find(raw.header.begin(), raw.header.end(), schema.columns[c].name);
        if (it == raw.header.end()) throw SchemaError("CSV is missing column '" + schema.columns[c].name + "'");
        source[c] = static_cast<std::size_t>(it - raw.header.begin());
    }

    // Keep rows with every schema cell present.
    std::vector<const std::vector<std::string>*> kept;
    std::size_t dropped = 0;
    for (const auto& row : raw.rows) {
        bool complete = true;
        for (std::size_t src : source) {
            if (src >= row.size() || is_missing(row[src])) {
                complete = false;
                break;
            }
        }
        if (complete) {
            kept.push_back(&row);
        } else {
            ++dropped;
        }
    }
    if (dropped > 0) warn("dropped " + std::to_string(dropped) + " rows with missing values");

    TabularDataset ds;
    ds.favorable_value = schema.favorable_value;
    ds.protected_spec = active;
    ds.dropped_rows = dropped;
    const auto n = static_cast<Eigen::Index>(kept.size());

    std::vector<std::size_t> feature_cols;
    std::size_t label_col = 0;
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        if (schema.columns[c].role == ColumnRole::class_label) {
            label_col = c;
        } else {
            feature_cols.push_back(c);
        }
    }
    ds.feature_schema.reserve(feature_cols.size());
    ds.features.resize(n, static_cast<Eigen::Index>(feature_cols.size()));
    ds.labels.resize(n);
    ds.encoders.resize(feature_cols.size());

    auto column_values = [&](std::size_t c) {
        std::vector<std::string> vals;
        vals.reserve(kept.size());
        for (const auto* row : kept) vals.push_back((*row)[source[c]]);
        return vals;
    };

    for (std::size_t f = 0; f < feature_cols.size(); ++f) {
        const ColumnSchema& col = schema.columns[feature_cols[f]];
        ds.feature_schema.push_back(col);
        const auto fi = static_cast<Eigen::Index>(f);
        auto vals = column_values(feature_cols[f]);
        if (col.role == ColumnRole::protected_attr) {
            const ProtectedSpec& spec = schema.protected_spec(col.name);
            ds.encoders[f] = designated_encoder(vals, spec.privileged_value, col.name);
            for (Eigen::Index i = 0; i < n; ++i) {
                ds.features(i, fi) = vals[static_cast<std::size_t>(i)] == spec.privileged_value ? 1.0 : 0.0;
            }
            if (col.name == active.column) ds.protected_column = f;
        } else if (col.kind == ColumnKind::numeric) {
            for (Eigen::Index i = 0; i < n; ++i) ds.features(i, fi) = parse_double(vals[static_cast<std::size_t>(i)], col.name);
        } else {
            CategoryEncoder enc = CategoryEncoder::fit(vals);
            if (col.kind == ColumnKind::binary && enc.size() > 2) {
                throw EncodingError("column '" + col.name + "' must be binary but has " + std::to_string(enc.size()) +
                                    " distinct values");
            }
            for (Eigen::Index i = 0; i < n; ++i) ds.features(i, fi) = enc.transform(vals[static_cast<std::size_t>(i)]);
            ds.encoders[f] = std::move(enc);
        }
    }

    ds.label_schema = schema.columns[label_col];
    auto label_vals = column_values(label_col);
    ds.label_encoder = designated_encoder(label_vals, schema.favorable_value, ds.label_schema.name);
    for (Eigen::Index i = 0; i < n; ++i) {
        ds.labels(i) = label_vals[static_cast<std::size_t>(i)] == schema.favorable_value ? 1.0 : 0.0;
    }

    ds.row_ids.resize(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) ds.row_ids[i] = static_cast<std::int64_t>(i);
    return ds;
}

TabularDataset load_csv(const std::filesystem::path& path, const DatasetSchema& schema,
                        const std::string& active_protected) {
    return encode_table(read_csv(path), schema, active_protected);
}

RawTable decode_table(const TabularDataset& ds) {
    RawTable table;
    for (const auto& c : ds.feature_schema) table.header.push_back(c.name);
    table.header.push_back(ds.label_schema.name);
    table.rows.reserve(ds.rows());
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        std::vector<std::string> row;
        row.reserve(ds.cols() + 1);
        for (std::size_t f = 0; f < ds.cols(); ++f) {
            const double v = ds.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f));
            if (ds.encoders[f]) {
                row.push_back(ds.encoders[f]->decode(static_cast<int>(std::lround(v))));
            } else {
                row.push_back(format_double(v));
            }
        }
        row.push_back(ds.label_encoder.size() == 2 ? ds.label_encoder.decode(ds.label(i)) : std::to_string(ds.label(i)));
        table.rows.push_back(std::move(row));
    }
    return table;
}

TabularDataset encode_categorical(const TabularDataset& ds) {
    TabularDataset out = ds;
    for (std::size_t f = 0; f < ds.cols(); ++f) {
        if (!ds.encoders[f] || ds.feature_schema[f].role == ColumnRole::protected_attr) continue;
        const auto& enc = *ds.encoders[f];
        for (Eigen::Index i = 0; i < out.features.rows(); ++i) {
            auto& cell = out.features(i, static_cast<Eigen::Index>(f));
            cell = enc.transform(enc.decode(static_cast<int>(std::lround(cell))));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Normalization

MinMaxScaler fit_min_max(const TabularDataset& ds) {
    MinMaxScaler s;
    for (std::size_t f = 0; f < ds.cols(); ++f) {
        const auto& col = ds.feature_schema[f];
        if (col.kind != ColumnKind::numeric || col.role != ColumnRole::feature) continue;
        s.columns.push_back(f);
        if (ds.rows() == 0) {
            s.min.push_back(0.0);
            s.max.push_back(0.0);
        } else {
            auto c = ds.features.col(static_cast<Eigen::Index>(f));
            s.min.push_back(c.minCoeff());
            s.max.push_back(c.maxCoeff());
        }
    }
    return s;
}

TabularDataset apply_min_max(const TabularDataset& ds, const MinMaxScaler& scaler) {
    TabularDataset out = ds;
    for (std::size_t k = 0; k < scaler.columns.size(); ++k) {
        auto c = out.features.col(static_cast<Eigen::Index>(scaler.columns[k]));
        const double range = scaler.max[k] - scaler.min[k];
        if (range > 0.0) {
            c = (c.array() - scaler.min[k]) / range;
        } else {
            c.setZero();
        }
    }
    out.scaler = scaler;
    return out;
}

TabularDataset normalize_numeric(const TabularDataset& ds) { return apply_min_max(ds, fit_min_max(ds)); }

// ---------------------------------------------------------------------------
// Splitting

std::array<std::vector<std::size_t>, 4> rows_by_group(const TabularDataset& ds) {
    std::array<std::vector<std::size_t>, 4> groups;
    for (std::size_t i = 0; i < ds.rows(); ++i) groups[static_cast<std::size_t>(ds.group(i))].push_back(i);
    return groups;
}

namespace {

void warn_empty_groups(const std::array<std::vector<std::size_t>, 4>& groups) {
    for (GroupTag g : kAllGroups) {
        if (groups[static_cast<std::size_t>(g)].empty()) {
            warn(std::string("group ") + to_string(g) + " has no rows; stratifying on the remaining groups");
        }
    }
}

}  // namespace

TrainTestSplit split_train_test(const TabularDataset& ds, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ConfigError("test_fraction must lie in (0, 1)");
    }
    auto groups = rows_by_group(ds);
    if (ds.rows() > 0) warn_empty_groups(groups);
    Rng rng(seed);
    TrainTestSplit split;
    for (auto& rows : groups) {
        shuffle(rows, rng);
        const auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(rows.size()) * test_fraction));
        split.test.insert(split.test.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_test));
        split.train.insert(split.train.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_test), rows.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

std::vector<std::size_t> stratified_folds(const TabularDataset& ds, std::size_t folds, std::uint64_t seed) {
    if (folds < 2) throw ConfigError("need at least 2 folds");
    auto groups = rows_by_group(ds);
    if (ds.rows() > 0) warn_empty_groups(groups);
    Rng rng(seed);
    std::vector<std::size_t> assignment(ds.rows(), 0);
    std::size_t offset = 0;
    for (auto& rows : groups) {
        shuffle(rows, rng);
        for (std::size_t k = 0; k < rows.size(); ++k) assignment[rows[k]] = (offset + k) % folds;
        offset = (offset + rows.size()) % folds;
    }
    return assignment;
}

// ---------------------------------------------------------------------------
// Synthetic data

DatasetSchema synthetic_schema() {
    DatasetSchema s;
    s.columns = {{"x1", ColumnKind::numeric, ColumnRole::feature},
                 {"x2", ColumnKind::numeric, ColumnRole::feature},
                 {"group", ColumnKind::binary, ColumnRole::protected_attr},
                 {"label", ColumnKind::binary, ColumnRole::class_label}};
    s.protected_attrs = {{"group", "privileged"}};
    s.favorable_value = "favorable";
    return s;
}

TabularDataset synth_biased_dataset(std::size_t n, double bias_strength, std::uint64_t seed) {
    if (n < 40) throw ConfigError("synthetic dataset needs n >= 40");
    if (!(bias_strength >= 0.0 && bias_strength <= 1.0)) throw ConfigError("bias_strength must lie in [0, 1]");
    const DatasetSchema schema = synthetic_schema();
    TabularDataset ds;
    ds.feature_schema = {schema.columns[0], schema.columns[1], schema.columns[2]};
    ds.label_schema = schema.columns[3];
    ds.protected_column = 2;
    ds.protected_spec = schema.protected_attrs[0];
    ds.favorable_value = schema.favorable_value;
    ds.encoders = {std::nullopt, std::nullopt, CategoryEncoder({"unprivileged", "privileged"})};
    ds.label_encoder = CategoryEncoder({"unfavorable", "favorable"});
    ds.features.resize(static_cast<Eigen::Index>(n), 3);
    ds.labels.resize(static_cast<Eigen::Index>(n));
    ds.row_ids.resize(n);

    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        const double x1 = uniform01(rng);
        const double x2 = uniform01(rng);
        const int privileged = uniform01(rng) < 0.5 ? 1 : 0;
        // Base favorable probability in [0.15, 0.85], shifted by +-bias/2 per group.
        const double base = 0.15 + 0.7 * 0.5 * (x1 + x2);
        const double p = std::clamp(base + (privileged ? 0.5 : -0.5) * bias_strength, 0.0, 1.0);
        ds.features(r, 0) = x1;
        ds.features(r, 1) = x2;
        ds.features(r, 2) = privileged;
        ds.labels(r) = uniform01(rng) < p ? 1.0 : 0.0;
        ds.row_ids[i] = static_cast<std::int64_t>(i);
    }
    return ds;
}

}  // namespace fairssl
