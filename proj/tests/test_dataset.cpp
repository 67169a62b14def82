#include "fairssl/dataset.hpp"
#include "fairssl/error.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <set>

using namespace fairssl;
using fairssl::testing::TempDir;
using fairssl::testing::write_file;

namespace {

const char* kSchema = R"({
  "columns": [
    {"name": "age", "kind": "numeric", "role": "feature"},
    {"name": "color", "kind": "categorical", "role": "feature"},
    {"name": "sex", "kind": "binary", "role": "protected"},
    {"name": "income", "kind": "binary", "role": "class_label"}
  ],
  "protected": {"column": "sex", "privileged_value": "Male"},
  "favorable_value": ">50K"
})";

DatasetSchema schema() { return parse_schema_json(kSchema); }

// Expected SPD of labels for the synthetic generator, estimated from counts.
double label_spd(const TabularDataset& ds) {
    double fav[2] = {0, 0};
    double n[2] = {0, 0};
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        n[ds.protected_value(i)] += 1;
        fav[ds.protected_value(i)] += ds.label(i);
    }
    return fav[1] / n[1] - fav[0] / n[0];
}

}  // namespace

TEST_CASE("group tags follow the label x protected table") {
    CHECK(group_of(1, 1) == GroupTag::FP);
    CHECK(group_of(0, 0) == GroupTag::UU);
    CHECK(group_of(1, 0) == GroupTag::FU);
    CHECK(group_of(0, 1) == GroupTag::UP);
    for (GroupTag g : kAllGroups) CHECK(group_of(group_label(g), group_protected(g)) == g);
}

TEST_CASE("schema validation") {
    CHECK_NOTHROW(schema().validate());
    CHECK_THROWS_AS(parse_schema_json(R"({"columns": [{"name": "a", "kind": "numeric", "role": "feature"}],
        "protected": {"column": "a", "privileged_value": "1"}, "favorable_value": "1"})"),
                    SchemaError);
    // Duplicate names.
    CHECK_THROWS_AS(parse_schema_json(R"({"columns": [
        {"name": "a", "kind": "numeric", "role": "feature"},
        {"name": "a", "kind": "binary", "role": "protected"},
        {"name": "y", "kind": "binary", "role": "class_label"}],
        "protected": {"column": "a", "privileged_value": "1"}, "favorable_value": "1"})"),
                    SchemaError);
    CHECK_THROWS_AS(parse_schema_json("not json"), SchemaError);
}

TEST_CASE("schema JSON round trip") {
    const DatasetSchema s = schema();
    const DatasetSchema back = parse_schema_json(schema_to_json(s));
    CHECK(back.columns == s.columns);
    CHECK(back.protected_attrs == s.protected_attrs);
    CHECK(back.favorable_value == s.favorable_value);
}

TEST_CASE("CSV parsing handles quotes, embedded commas and a BOM") {
    const RawTable t = parse_csv("\xEF\xBB\xBF" "a,b\n\"x, y\",\"say \"\"hi\"\"\"\n1,\n");
    REQUIRE(t.header == std::vector<std::string>{"a", "b"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][0] == "x, y");
    CHECK(t.rows[0][1] == "say \"hi\"");
    CHECK(t.rows[1][1].empty());
    CHECK(format_csv_cell("x, y") == "\"x, y\"");
    CHECK(format_csv_cell("plain") == "plain");
}

TEST_CASE("load_csv encodes, maps protected and class values, drops incomplete rows") {
    TempDir dir("load");
    const auto path = dir / "d.csv";

    SUBCASE("three rows, one with a missing cell") {
        write_file(path, "age,color,sex,income,extra\n30,red,Male,>50K,z\n40,,Female,<=50K,z\n50,blue,Female,>50K,z\n");
        const TabularDataset ds = load_csv(path, schema());
        CHECK(ds.rows() == 2);
        CHECK(ds.dropped_rows == 1);
        CHECK(ds.cols() == 3);
        CHECK(ds.protected_value(0) == 1);
        CHECK(ds.protected_value(1) == 0);
        CHECK(ds.label(0) == 1);
        CHECK(ds.group(1) == GroupTag::FU);
        CHECK(ds.features(0, 1) == 0.0);  // red
        CHECK(ds.features(1, 1) == 1.0);  // blue
    }
    SUBCASE("'?' counts as missing") {
        write_file(path, "age,color,sex,income\n?,red,Male,>50K\n41,red,Male,>50K\n");
        const TabularDataset ds = load_csv(path, schema());
        CHECK(ds.rows() == 1);
        CHECK(ds.dropped_rows == 1);
    }
    SUBCASE("header only") {
        write_file(path, "age,color,sex,income\n");
        const TabularDataset ds = load_csv(path, schema());
        CHECK(ds.rows() == 0);
        CHECK(ds.cols() == 3);
    }
    SUBCASE("missing column is a schema error") {
        write_file(path, "age,sex,income\n1,Male,>50K\n");
        CHECK_THROWS_AS(load_csv(path, schema()), SchemaError);
    }
    SUBCASE("three protected values is an encoding error") {
        write_file(path, "age,color,sex,income\n1,red,Male,>50K\n2,red,Female,>50K\n3,red,Other,>50K\n");
        CHECK_THROWS_AS(load_csv(path, schema()), EncodingError);
    }
    SUBCASE("non-numeric value in a numeric column") {
        write_file(path, "age,color,sex,income\nold,red,Male,>50K\n");
        CHECK_THROWS_AS(load_csv(path, schema()), EncodingError);
    }
}

TEST_CASE("decode reproduces raw values") {
    const RawTable raw = parse_csv("age,color,sex,income\n30,red,Male,>50K\n41.5,blue,Female,<=50K\n7,green,Male,<=50K\n");
    const TabularDataset ds = encode_table(raw, schema());
    const RawTable back = decode_table(ds);
    CHECK(back.header == raw.header);
    CHECK(back.rows == raw.rows);
}

TEST_CASE("category encoder codes by first appearance") {
    const std::vector<std::string> vals{"red", "blue", "red"};
    const CategoryEncoder enc = CategoryEncoder::fit(vals);
    CHECK(enc.transform(vals) == std::vector<int>{0, 1, 0});
    CHECK(enc.decode(1) == "blue");
    CHECK_THROWS_AS(enc.transform("green"), EncodingError);
}

TEST_CASE("encode_categorical keeps codes and leaves numeric columns alone") {
    const RawTable raw = parse_csv("age,color,sex,income\n30,red,Male,>50K\n41,blue,Female,<=50K\n7,red,Male,<=50K\n");
    const TabularDataset ds = encode_table(raw, schema());
    const TabularDataset again = encode_categorical(ds);
    CHECK(again.features == ds.features);
    TabularDataset bad = ds;
    bad.features(0, 1) = 7;  // code outside the mapping
    CHECK_THROWS(encode_categorical(bad));
}

TEST_CASE("min-max normalization") {
    Eigen::MatrixXd x(3, 3);
    x << 2, 5, 0,  //
        4, 5, 1,   //
        6, 5, 1;
    const TabularDataset ds = testing::make_dataset(x, {1, 0, 1}, {1, 0, 0});
    const TabularDataset n = normalize_numeric(ds);
    CHECK(n.features.col(0) == Eigen::Vector3d(0, 0.5, 1));
    CHECK(n.features.col(1) == Eigen::Vector3d(0, 0, 0));
    CHECK(n.features.col(2) == Eigen::Vector3d(0, 1, 1));
    CHECK(n.features.col(3) == ds.features.col(3));  // protected untouched
    REQUIRE(n.scaler);
    CHECK(n.scaler->min[0] == 2);

    SUBCASE("idempotent") { CHECK(normalize_numeric(n).features == n.features); }
    SUBCASE("scaler reused on held-out rows") {
        Eigen::MatrixXd t(1, 3);
        t << 8, 5, 0;
        const TabularDataset held = apply_min_max(testing::make_dataset(t, {1}, {1}), *n.scaler);
        CHECK(held.features(0, 0) == doctest::Approx(1.5));
    }
}

TEST_CASE("split_train_test is exact, stratified and deterministic") {
    const TabularDataset ds = synth_biased_dataset(100, 0.3, 3);
    const TrainTestSplit a = split_train_test(ds, 0.2, 1);
    const TrainTestSplit b = split_train_test(ds, 0.2, 1);
    CHECK(a.train == b.train);
    CHECK(a.test == b.test);
    CHECK(a.train.size() + a.test.size() == 100);
    CHECK(a.test.size() >= 18);
    CHECK(a.test.size() <= 22);
    std::set<std::size_t> all(a.train.begin(), a.train.end());
    all.insert(a.test.begin(), a.test.end());
    CHECK(all.size() == 100);

    // Every group keeps its share within one row.
    const auto groups = rows_by_group(ds);
    const auto test_groups = rows_by_group(ds.subset(a.test));
    for (GroupTag g : kAllGroups) {
        const double expected = 0.2 * static_cast<double>(groups[static_cast<std::size_t>(g)].size());
        CHECK(std::abs(static_cast<double>(test_groups[static_cast<std::size_t>(g)].size()) - expected) <= 1.0);
    }
}

TEST_CASE("split of a single-group dataset warns and still splits 8/2") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(10, 1);
    const TabularDataset ds = testing::make_dataset(x, std::vector<int>(10, 1), std::vector<int>(10, 1));
    const TrainTestSplit s = split_train_test(ds, 0.2, 5);
    CHECK(s.train.size() == 8);
    CHECK(s.test.size() == 2);
    CHECK_THROWS_AS(split_train_test(ds, 1.0, 5), ConfigError);
}

TEST_CASE("stratified folds balance every group") {
    const TabularDataset ds = synth_biased_dataset(503, 0.2, 9);
    const auto folds = stratified_folds(ds, 5, 11);
    CHECK(folds == stratified_folds(ds, 5, 11));
    const auto groups = rows_by_group(ds);
    for (const auto& rows : groups) {
        std::array<int, 5> per{};
        for (std::size_t r : rows) per[folds[r]]++;
        CHECK(*std::max_element(per.begin(), per.end()) - *std::min_element(per.begin(), per.end()) <= 1);
    }
    std::array<int, 5> sizes{};
    for (std::size_t f : folds) sizes[f]++;
    CHECK(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()) <= 1);
}

TEST_CASE("synthetic generator plants the requested disparity") {
    CHECK(std::abs(label_spd(synth_biased_dataset(10000, 0.0, 1))) < 0.05);
    CHECK(label_spd(synth_biased_dataset(10000, 0.3, 1)) == doctest::Approx(0.3).epsilon(0.05 / 0.3));
    const TabularDataset a = synth_biased_dataset(500, 0.3, 4);
    const TabularDataset b = synth_biased_dataset(500, 0.3, 4);
    CHECK(a.features == b.features);
    CHECK(a.labels == b.labels);
    CHECK_THROWS_AS(synth_biased_dataset(39, 0.3, 4), ConfigError);
    // Features lie in [0,1].
    CHECK(a.features.leftCols(2).minCoeff() >= 0.0);
    CHECK(a.features.leftCols(2).maxCoeff() <= 1.0);
}

TEST_CASE("subset, concat and with_protected") {
    const RawTable raw = parse_csv("age,color,sex,income\n30,red,Male,>50K\n41,blue,Female,<=50K\n7,red,Male,<=50K\n");
    DatasetSchema s = schema();
    s.columns.push_back({"race", ColumnKind::binary, ColumnRole::protected_attr});
    s.protected_attrs.push_back({"race", "W"});
    RawTable with_race = raw;
    with_race.header.push_back("race");
    for (auto& row : with_race.rows) row.push_back("W");
    with_race.rows[2].back() = "B";
    const TabularDataset ds = encode_table(with_race, s, "sex");
    const std::vector<std::size_t> rows{2, 0, 2};
    const TabularDataset sub = ds.subset(rows);
    CHECK(sub.rows() == 3);
    CHECK(sub.row_ids == std::vector<std::int64_t>{2, 0, 2});
    CHECK(ds.concat(sub).rows() == 6);

    const TabularDataset by_race = ds.with_protected({"race", "W"});
    CHECK(by_race.protected_vector() == std::vector<int>{1, 1, 0});
    CHECK(ds.protected_vector() == std::vector<int>{1, 0, 1});
    CHECK(ds.feature_index("race") == 3);
    CHECK_THROWS_AS(ds.feature_index("nope"), SchemaError);
}
