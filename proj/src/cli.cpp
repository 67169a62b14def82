#include "fairssl/cli.hpp"

#include "fairssl/error.hpp"
#include "fairssl/evaluation.hpp"
#include "fairssl/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fairssl {

namespace {

namespace fs = std::filesystem;

struct ExperimentFlags {
    std::string config;
    std::string dataset;
    std::string schema;
    std::string protected_attr;
    std::string learner;
    std::string variant;
    double labeled_fraction = 0.0;
    std::size_t folds = 0;
    std::size_t repeats = 0;
    std::uint64_t seed = 0;
    std::size_t threads = 0;

    CLI::Option* labeled_fraction_opt = nullptr;
    CLI::Option* folds_opt = nullptr;
    CLI::Option* repeats_opt = nullptr;
    CLI::Option* seed_opt = nullptr;

    void add_to(CLI::App& app) {
        app.add_option("--config", config, "Experiment config JSON; flags below override its values");
        app.add_option("--dataset", dataset, "CSV path, or 'synthetic'");
        app.add_option("--schema", schema, "Schema JSON for a CSV dataset");
        app.add_option("--protected", protected_attr, "Active protected attribute");
        app.add_option("--learner", learner, "logistic or linear_svm");
        app.add_option("--variant", variant, "default, ST, LP, LS, CT, best, a comma list, or all");
        labeled_fraction_opt = app.add_option("--labeled-fraction", labeled_fraction, "Initial labeled share in (0, 1]");
        folds_opt = app.add_option("--folds", folds, "Cross-validation folds");
        repeats_opt = app.add_option("--repeats", repeats, "Cross-validation repeats");
        seed_opt = app.add_option("--seed", seed, "Base seed");
        app.add_option("--threads", threads, "Worker threads (default: FAIRSSL_THREADS or all cores)");
    }

    ExperimentConfig resolve() const {
        ExperimentConfig cfg = config.empty() ? ExperimentConfig{} : load_config(config);
        if (!dataset.empty()) {
            cfg.dataset = dataset;
            if (dataset != kSyntheticDataset && schema.empty()) {
                const fs::path sibling = fs::path(dataset).replace_extension(".schema.json");
                if (fs::exists(sibling)) cfg.schema = sibling.string();
            }
        }
        if (!schema.empty()) cfg.schema = schema;
        if (!protected_attr.empty()) cfg.protected_attr = protected_attr;
        if (!learner.empty()) cfg.learner = parse_learner(learner);
        if (!variant.empty()) cfg.variants = parse_variant_list(variant);
        if (labeled_fraction_opt->count()) cfg.labeled_fraction = labeled_fraction;
        if (folds_opt->count()) cfg.folds = folds;
        if (repeats_opt->count()) cfg.repeats = repeats;
        if (seed_opt->count()) cfg.seed = seed;
        cfg.validate();
        return cfg;
    }

    RunOptions options() const {
        RunOptions o;
        o.threads = threads;
        return o;
    }
};

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
}

Table dataset_table(const TabularDataset& ds) {
    Table t;
    t.headers = {"Group", "Rows", "Share", "Favorable rate"};
    const GroupCounts counts = group_counts(ds);
    const double n = static_cast<double>(ds.rows());
    for (GroupTag g : kAllGroups) {
        t.rows.push_back({to_string(g), counts[g], n > 0 ? static_cast<double>(counts[g]) / n : 0.0, Json(nullptr)});
    }
    for (int p : {1, 0}) {
        std::size_t rows = 0;
        std::size_t fav = 0;
        for (std::size_t i = 0; i < ds.rows(); ++i) {
            if (ds.protected_value(i) != p) continue;
            ++rows;
            fav += static_cast<std::size_t>(ds.label(i));
        }
        t.rows.push_back({p ? "privileged" : "unprivileged", rows, n > 0 ? static_cast<double>(rows) / n : 0.0,
                          rows ? Json(static_cast<double>(fav) / static_cast<double>(rows)) : Json(nullptr)});
    }
    return t;
}

Table table_for_file(const fs::path& in) {
    const std::string ext = in.extension().string();
    if (ext == ".jsonl") {
        const auto records = read_records(in);
        if (records.empty()) throw DataError(in.string() + " holds no fold records");
        return metrics_table(records);
    }
    if (ext == ".csv") {
        const fs::path schema = fs::path(in).replace_extension(".schema.json");
        if (!fs::exists(schema)) throw ConfigError("no schema next to " + in.string() + " (expected " + schema.string() + ")");
        return dataset_table(load_csv(in, load_schema_json(schema)));
    }
    const Json j = read_json(in);
    const std::string kind = j.is_object() ? j.value("kind", "") : "";
    if (kind == "summary") return summary_table(j);
    if (kind == "compare") return compare_table(j);
    if (kind == "sweep") return sweep_table(j);
    if (kind == "timings") return timings_table(j);
    if (j.is_array() && !j.empty() && j.front().value("kind", "") == "timings") {
        Table all;
        all.headers = {"Labeled", "Variant", "Pipeline seconds", "Pseudo-label seconds"};
        for (const auto& t : j) {
            for (const auto& row : timings_table(t).rows) {
                all.rows.push_back({t.value("labeled_fraction", Json(nullptr)), row[0], row[1], row[2]});
            }
        }
        return all;
    }
    throw DataError(in.string() + " is not a fairssl result file");
}

std::vector<double> parse_fractions(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("bad labeled fraction '" + item + "'");
        }
    }
    return out;
}

int run_command(const ExperimentFlags& flags, const fs::path& out_dir, TableFormat format, std::ostream& out,
                std::ostream& err) {
    const ExperimentConfig cfg = flags.resolve();
    const EvalReport report = repeat_cv(cfg, flags.options());
    ensure_dir(out_dir);
    std::vector<Json> lines;
    for (const auto& r : report.records) lines.push_back(fold_record_json(report, r));
    const fs::path base = out_dir / cfg.name;
    write_jsonl(base.string() + ".jsonl", lines);
    const Json summary = summary_json(report);
    write_json(base.string() + ".summary.json", summary);
    write_json(base.string() + ".timings.json", timings_json(report));
    out << render(summary_table(summary), format);
    err << "wrote " << base.string() << ".{jsonl,summary.json,timings.json}\n";
    return kExitOk;
}

int sweep_command(const ExperimentFlags& flags, const std::string& fractions, const fs::path& out_dir,
                  TableFormat format, std::ostream& out, std::ostream& err) {
    const ExperimentConfig cfg = flags.resolve();
    const auto rows = sweep_labeled_fraction(cfg, parse_fractions(fractions), flags.options());
    ensure_dir(out_dir);
    std::vector<Json> lines;
    Json timings = Json::array();
    for (const auto& row : rows) {
        for (const auto& r : row.report.records) lines.push_back(fold_record_json(row.report, r));
        Json t = timings_json(row.report);
        t["labeled_fraction"] = row.labeled_fraction;
        timings.push_back(t);
    }
    const fs::path base = out_dir / (cfg.name + ".sweep");
    write_jsonl(base.string() + ".jsonl", lines);
    const Json summary = sweep_json(rows);
    write_json(base.string() + ".json", summary);
    write_json(base.string() + ".timings.json", timings);
    out << render(sweep_table(summary), format);
    err << "wrote " << base.string() << ".{jsonl,json,timings.json}\n";
    return kExitOk;
}

int compare_command(const std::vector<std::string>& inputs, const std::string& baseline, const std::string& out_file,
                    TableFormat format, std::ostream& out) {
    std::vector<StoredRecord> records;
    for (const auto& in : inputs) {
        auto r = read_records(in);
        records.insert(records.end(), r.begin(), r.end());
    }
    const auto algorithms = group_samples(records);
    const auto base = std::find_if(algorithms.begin(), algorithms.end(),
                                   [&](const AlgorithmSamples& a) { return a.algorithm == baseline; });
    if (base == algorithms.end()) throw ConfigError("baseline '" + baseline + "' does not appear in the inputs");
    if (algorithms.size() < 2) throw ConfigError("compare needs at least two algorithms");
    Json tables = Json::array();
    for (const auto& a : algorithms) {
        if (a.algorithm == baseline) continue;
        tables.push_back(compare_json(compare(a.algorithm, a.cells, baseline, base->cells)));
    }
    const Json result{{"kind", "compare"}, {"baseline", baseline}, {"tables", tables}};
    if (!out_file.empty()) write_json(out_file, result);
    out << render(compare_table(result), format);
    return kExitOk;
}

int synth_command(std::size_t n, double bias, std::uint64_t seed, const fs::path& out_file, std::ostream& err) {
    const TabularDataset ds = synth_biased_dataset(n, bias, seed);
    if (out_file.has_parent_path()) ensure_dir(out_file.parent_path());
    write_csv(out_file, decode_table(ds));
    const fs::path schema = fs::path(out_file).replace_extension(".schema.json");
    std::ofstream s(schema, std::ios::binary);
    if (!s) throw Error("cannot write " + schema.string());
    s << schema_to_json(synthetic_schema()) << '\n';
    err << "wrote " << out_file.string() << " and " << schema.string() << '\n';
    return kExitOk;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fair semi-supervised learning experiments", "fairssl"};
    app.require_subcommand(1);
    app.footer("Flags override values from --config. FAIRSSL_THREADS caps evaluation threads.\n"
               "Exit status: 0 success, 1 usage or config error, 2 runtime error.");

    std::string format_name = "text";
    bool quiet = false;

    auto* run = app.add_subcommand("run", "Cross-validate the configured variants and write JSON results");
    ExperimentFlags run_flags;
    run_flags.add_to(*run);
    std::string run_out = "out";
    run->add_option("--out", run_out, "Output directory");
    run->add_option("--format", format_name, "text, csv or json");
    run->add_flag("--quiet", quiet, "Suppress warnings");

    auto* sweep = app.add_subcommand("sweep", "Repeat the run for several labeled fractions");
    ExperimentFlags sweep_flags;
    sweep_flags.add_to(*sweep);
    std::string sweep_out = "out";
    std::string fractions = "0.01,0.05,0.10,0.20";
    sweep->add_option("--fractions", fractions, "Comma-separated labeled fractions");
    sweep->add_option("--out", sweep_out, "Output directory");
    sweep->add_option("--format", format_name, "text, csv or json");
    sweep->add_flag("--quiet", quiet, "Suppress warnings");

    auto* cmp = app.add_subcommand("compare", "Win/tie/loss counts from Scott-Knott ranks over stored runs");
    std::vector<std::string> cmp_inputs;
    std::string baseline = "default";
    std::string cmp_out;
    cmp->add_option("--in", cmp_inputs, "JSON-lines result files")->required();
    cmp->add_option("--baseline", baseline, "Algorithm the others are compared against");
    cmp->add_option("--out", cmp_out, "Also write the comparison JSON here");
    cmp->add_option("--format", format_name, "text, csv or json");

    auto* report = app.add_subcommand("report", "Render a stored result file as a table");
    std::string report_in;
    report->add_option("--in", report_in, "Result file (.jsonl, summary/compare/sweep/timings JSON, or dataset CSV)")
        ->required();
    report->add_option("--format", format_name, "text, csv or json");

    auto* synth = app.add_subcommand("synth", "Write a synthetic biased dataset and its schema");
    std::size_t synth_n = 4000;
    double synth_bias = 0.3;
    std::uint64_t synth_seed = 7;
    std::string synth_out = "synthetic.csv";
    synth->add_option("--n", synth_n, "Rows");
    synth->add_option("--bias", synth_bias, "Favorable-rate gap between the protected groups");
    synth->add_option("--seed", synth_seed, "Generator seed");
    synth->add_option("--out", synth_out, "CSV path; the schema goes next to it");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitConfig;
    }

    set_warnings_enabled(!quiet);
    try {
        const TableFormat format = parse_table_format(format_name);
        if (*run) return run_command(run_flags, run_out, format, out, err);
        if (*sweep) return sweep_command(sweep_flags, fractions, sweep_out, format, out, err);
        if (*cmp) return compare_command(cmp_inputs, baseline, cmp_out, format, out);
        if (*report) {
            out << render(table_for_file(report_in), format);
            return kExitOk;
        }
        if (*synth) return synth_command(synth_n, synth_bias, synth_seed, synth_out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const SchemaError& e) {
        err << "schema error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitConfig;
}

}  // namespace fairssl
