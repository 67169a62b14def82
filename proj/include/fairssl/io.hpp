#pragma once

#include "fairssl/evaluation.hpp"
#include "fairssl/stats.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fairssl {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Experiment configs

/// Strict: unknown keys and wrong types raise ConfigError. "variant" may be a
/// single code, a list of codes, or "all" (default plus the four variants).
ExperimentConfig config_from_json(const Json& j, ExperimentConfig base = {});
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);  // ConfigError when missing or malformed
Json config_to_json(const ExperimentConfig& cfg);

std::vector<Variant> parse_variant_list(const std::string& text);  // "ST", "ST,LP", "all"

// ---------------------------------------------------------------------------
// Result files

/// One stored fold record with the keys needed to regroup it.
struct StoredRecord {
    std::string name;
    std::string dataset;
    std::string protected_attr;
    std::string learner;
    std::string variant;
    std::optional<std::string> chosen;
    double labeled_fraction = 0.0;
    std::uint64_t seed = 0;
    std::size_t repeat = 0;
    std::size_t fold = 0;
    MetricRecord metrics;
    std::size_t pseudo_labeled = 0;
    std::size_t synthetic_rows = 0;
    Json config;
};

Json fold_record_json(const EvalReport& report, const FoldRecord& r);
StoredRecord stored_record_from_json(const Json& j);
Json stored_record_to_json(const StoredRecord& r);

/// Medians per variant, Scott-Knott ranks per metric and, when the default
/// learner is present, win/tie/loss of every variant against it.
Json summary_json(const EvalReport& report);
/// Wall-clock data kept apart from the summary so the summary is reproducible.
Json timings_json(const EvalReport& report);
Json compare_json(const CompareTable& t);
Json sweep_json(const std::vector<SweepRow>& rows);

void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& lines);
std::vector<Json> read_jsonl(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

std::vector<StoredRecord> read_records(const std::filesystem::path& jsonl);

/// Per-variant samples of stored records, one CellSamples per
/// (dataset, protected, learner, labeled_fraction) cell.
struct AlgorithmSamples {
    std::string algorithm;
    std::vector<CellSamples> cells;
};

std::vector<AlgorithmSamples> group_samples(const std::vector<StoredRecord>& records);

// ---------------------------------------------------------------------------
// Tables

enum class TableFormat { text, csv, json };

TableFormat parse_table_format(const std::string& name);

struct Table {
    std::vector<std::string> headers;
    std::vector<std::vector<Json>> rows;  // numbers, strings or null
};

std::string render(const Table& t, TableFormat format);

/// Median of every metric per (variant, labeled_fraction) of stored records.
Table metrics_table(const std::vector<StoredRecord>& records);
Table summary_table(const Json& summary);
Table compare_table(const Json& compare);
Table sweep_table(const Json& sweep);
Table timings_table(const Json& timings);

}  // namespace fairssl
