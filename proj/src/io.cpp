#include "fairssl/io.hpp"

#include "fairssl/error.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fairssl {

namespace {

[[noreturn]] void bad_key(const std::string& key, const std::string& expected) {
    throw ConfigError("config key '" + key + "' must be " + expected);
}

double get_double(const Json& v, const std::string& key) {
    if (!v.is_number()) bad_key(key, "a number");
    return v.get<double>();
}

std::uint64_t get_unsigned(const Json& v, const std::string& key) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    bad_key(key, "a non-negative integer");
}

int get_int(const Json& v, const std::string& key) {
    if (!v.is_number_integer()) bad_key(key, "an integer");
    return v.get<int>();
}

std::string get_string(const Json& v, const std::string& key) {
    if (!v.is_string()) bad_key(key, "a string");
    return v.get<std::string>();
}

const Json& get_object(const Json& v, const std::string& key) {
    if (!v.is_object()) bad_key(key, "an object");
    return v;
}

std::string shortest(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

}  // namespace

std::vector<Variant> parse_variant_list(const std::string& text) {
    if (text == "all") {
        return {kReportVariants.begin(), kReportVariants.end()};
    }
    std::vector<Variant> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw ConfigError("empty entry in variant list '" + text + "'");
        out.push_back(parse_variant(item));
    }
    if (out.empty()) throw ConfigError("empty variant list");
    return out;
}

ExperimentConfig config_from_json(const Json& j, ExperimentConfig cfg) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, v] : j.items()) {
        if (key == "name") cfg.name = get_string(v, key);
        else if (key == "dataset") cfg.dataset = get_string(v, key);
        else if (key == "schema") cfg.schema = get_string(v, key);
        else if (key == "protected") cfg.protected_attr = get_string(v, key);
        else if (key == "learner") cfg.learner = parse_learner(get_string(v, key));
        else if (key == "variant") {
            if (v.is_array()) {
                cfg.variants.clear();
                for (const auto& item : v) cfg.variants.push_back(parse_variant(get_string(item, key)));
            } else {
                cfg.variants = parse_variant_list(get_string(v, key));
            }
        } else if (key == "labeled_fraction") cfg.labeled_fraction = get_double(v, key);
        else if (key == "folds") cfg.folds = get_unsigned(v, key);
        else if (key == "repeats") cfg.repeats = get_unsigned(v, key);
        else if (key == "seed") cfg.seed = get_unsigned(v, key);
        else if (key == "synthetic") {
            for (const auto& [k, s] : get_object(v, key).items()) {
                const std::string full = "synthetic." + k;
                if (k == "n") cfg.synthetic.n = get_unsigned(s, full);
                else if (k == "bias") cfg.synthetic.bias = get_double(s, full);
                else if (k == "seed") cfg.synthetic.seed = get_unsigned(s, full);
                else throw ConfigError("unknown config key '" + full + "'");
            }
        } else if (key == "ssl") {
            for (const auto& [k, s] : get_object(v, key).items()) {
                const std::string full = "ssl." + k;
                if (k == "threshold") cfg.ssl.threshold = get_double(s, full);
                else if (k == "selection_mode") {
                    const std::string mode = get_string(s, full);
                    if (mode == "threshold") cfg.ssl.selection_mode = SelectionMode::threshold;
                    else if (mode == "k_best") cfg.ssl.selection_mode = SelectionMode::k_best;
                    else bad_key(full, "\"threshold\" or \"k_best\"");
                } else if (k == "k_best") cfg.ssl.k_best = get_unsigned(s, full);
                else if (k == "max_iterations") cfg.ssl.max_iterations = get_int(s, full);
                else if (k == "k_neighbors") cfg.ssl.graph.k_neighbors = get_unsigned(s, full);
                else if (k == "kernel_width") cfg.ssl.graph.kernel_width = get_double(s, full);
                else if (k == "spreading_alpha") cfg.ssl.spreading_alpha = get_double(s, full);
                else throw ConfigError("unknown config key '" + full + "'");
            }
        } else if (key == "balancer") {
            for (const auto& [k, s] : get_object(v, key).items()) {
                const std::string full = "balancer." + k;
                if (k == "cr") cfg.balancer.cr = get_double(s, full);
                else if (k == "f") cfg.balancer.f = get_double(s, full);
                else throw ConfigError("unknown config key '" + full + "'");
            }
        } else if (key == "training") {
            for (const auto& [k, s] : get_object(v, key).items()) {
                const std::string full = "training." + k;
                if (k == "optimizer") cfg.training.optimizer = parse_optimizer(get_string(s, full));
                else if (k == "learning_rate") cfg.training.learning_rate = get_double(s, full);
                else if (k == "epochs") cfg.training.epochs = get_int(s, full);
                else if (k == "l2") cfg.training.l2 = get_double(s, full);
                else throw ConfigError("unknown config key '" + full + "'");
            }
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    return cfg;
}

ExperimentConfig parse_config(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("malformed config JSON: ") + e.what());
    }
    return config_from_json(j);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

Json config_to_json(const ExperimentConfig& cfg) {
    Json variants = Json::array();
    for (Variant v : cfg.variants) variants.push_back(to_string(v));
    Json j;
    j["name"] = cfg.name;
    j["dataset"] = cfg.dataset;
    if (!cfg.schema.empty()) j["schema"] = cfg.schema;
    if (cfg.dataset == kSyntheticDataset) {
        j["synthetic"] = {{"n", cfg.synthetic.n}, {"bias", cfg.synthetic.bias}, {"seed", cfg.synthetic.seed}};
    }
    j["protected"] = cfg.protected_attr;
    j["learner"] = to_string(cfg.learner);
    j["variant"] = variants;
    j["labeled_fraction"] = cfg.labeled_fraction;
    j["folds"] = cfg.folds;
    j["repeats"] = cfg.repeats;
    j["seed"] = cfg.seed;
    j["ssl"] = {{"threshold", cfg.ssl.threshold},
                {"selection_mode", cfg.ssl.selection_mode == SelectionMode::threshold ? "threshold" : "k_best"},
                {"k_best", cfg.ssl.k_best},
                {"max_iterations", cfg.ssl.max_iterations},
                {"k_neighbors", cfg.ssl.graph.k_neighbors},
                {"kernel_width", cfg.ssl.graph.kernel_width},
                {"spreading_alpha", cfg.ssl.spreading_alpha}};
    j["balancer"] = {{"cr", cfg.balancer.cr}, {"f", cfg.balancer.f}};
    j["training"] = {{"optimizer", to_string(cfg.training.optimizer)},
                     {"learning_rate", cfg.training.learning_rate},
                     {"epochs", cfg.training.epochs},
                     {"l2", cfg.training.l2}};
    return j;
}

// ---------------------------------------------------------------------------

namespace {

Json metrics_json(const MetricRecord& m) {
    Json j = Json::object();
    for (Metric k : kAllMetrics) {
        const auto& v = m[k];
        j[std::string(metric_name(k))] = v ? Json(*v) : Json(nullptr);
    }
    return j;
}

MetricRecord metrics_from_json(const Json& j) {
    MetricRecord m;
    for (Metric k : kAllMetrics) {
        const Json& v = j.at(std::string(metric_name(k)));
        if (!v.is_null()) m[k] = v.get<double>();
    }
    return m;
}

}  // namespace

Json fold_record_json(const EvalReport& report, const FoldRecord& r) {
    const ExperimentConfig& cfg = report.config;
    StoredRecord s;
    s.name = cfg.name;
    s.dataset = cfg.dataset;
    s.protected_attr = cfg.protected_attr;
    s.learner = to_string(cfg.learner);
    s.variant = to_string(r.variant);
    if (r.chosen) s.chosen = to_string(*r.chosen);
    s.labeled_fraction = cfg.labeled_fraction;
    s.seed = cfg.seed;
    s.repeat = r.repeat;
    s.fold = r.fold;
    s.metrics = r.metrics;
    s.pseudo_labeled = r.pseudo_labeled;
    s.synthetic_rows = r.synthetic_rows;
    s.config = config_to_json(cfg);
    return stored_record_to_json(s);
}

Json stored_record_to_json(const StoredRecord& r) {
    Json j;
    j["kind"] = "fold";
    j["name"] = r.name;
    j["dataset"] = r.dataset;
    j["protected"] = r.protected_attr;
    j["learner"] = r.learner;
    j["variant"] = r.variant;
    if (r.chosen) j["chosen"] = *r.chosen;
    j["labeled_fraction"] = r.labeled_fraction;
    j["seed"] = r.seed;
    j["repeat"] = r.repeat;
    j["fold"] = r.fold;
    const Json metrics = metrics_json(r.metrics);
    for (const auto& [k, v] : metrics.items()) j[k] = v;
    j["pseudo_labeled"] = r.pseudo_labeled;
    j["synthetic_rows"] = r.synthetic_rows;
    j["config"] = r.config;
    return j;
}

StoredRecord stored_record_from_json(const Json& j) {
    try {
        StoredRecord r;
        r.name = j.at("name").get<std::string>();
        r.dataset = j.at("dataset").get<std::string>();
        r.protected_attr = j.at("protected").get<std::string>();
        r.learner = j.at("learner").get<std::string>();
        r.variant = j.at("variant").get<std::string>();
        if (j.contains("chosen")) r.chosen = j.at("chosen").get<std::string>();
        r.labeled_fraction = j.at("labeled_fraction").get<double>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.repeat = j.at("repeat").get<std::size_t>();
        r.fold = j.at("fold").get<std::size_t>();
        r.metrics = metrics_from_json(j);
        r.pseudo_labeled = j.value("pseudo_labeled", std::size_t{0});
        r.synthetic_rows = j.value("synthetic_rows", std::size_t{0});
        r.config = j.value("config", Json::object());
        return r;
    } catch (const Json::exception& e) {
        throw DataError(std::string("malformed fold record: ") + e.what());
    }
}

namespace {

Json win_tie_loss_json(const WinTieLoss& w) { return {{"win", w.win}, {"tie", w.tie}, {"loss", w.loss}}; }

}  // namespace

Json compare_json(const CompareTable& t) {
    Json per = Json::object();
    for (std::size_t k = 0; k < kMetricCount; ++k) {
        per[std::string(metric_name(kAllMetrics[k]))] = win_tie_loss_json(t.per_metric[k]);
    }
    return {{"subject", t.subject},
            {"baseline", t.baseline},
            {"cells", t.cells},
            {"per_metric", per},
            {"total", win_tie_loss_json(t.total)}};
}

Json summary_json(const EvalReport& report) {
    Json j;
    j["kind"] = "summary";
    j["name"] = report.config.name;
    j["records"] = report.records.size();
    Json variants = Json::array();
    for (const auto& s : report.summaries) {
        Json v;
        v["variant"] = to_string(s.variant);
        v["records"] = s.records;
        v["medians"] = metrics_json(s.medians);
        if (s.variant == Variant::best) {
            Json chosen = Json::object();
            for (SslVariant sv : kAllSslVariants) {
                std::size_t n = 0;
                for (const auto* r : report.records_for(Variant::best)) n += r->chosen == sv ? 1 : 0;
                chosen[to_string(sv)] = n;
            }
            v["chosen"] = chosen;
        }
        variants.push_back(v);
    }
    j["variants"] = variants;

    if (report.summaries.size() > 1) {
        Json ranks = Json::object();
        for (std::size_t k = 0; k < kMetricCount; ++k) {
            std::vector<NamedSample> groups;
            for (const auto& s : report.summaries) {
                NamedSample g{to_string(s.variant), {}};
                for (const auto* r : report.records_for(s.variant)) {
                    if (r->metrics.values[k]) g.values.push_back(*r->metrics.values[k]);
                }
                if (!g.values.empty()) groups.push_back(std::move(g));
            }
            Json m = Json::object();
            if (!groups.empty()) {
                // Rank 1 is the best group in the metric's direction.
                const auto ranked = scott_knott(groups);
                int max_rank = 1;
                for (const auto& g : ranked) max_rank = std::max(max_rank, g.rank);
                for (const auto& g : ranked) {
                    m[g.name] = higher_is_better(kAllMetrics[k]) ? max_rank + 1 - g.rank : g.rank;
                }
            }
            ranks[std::string(metric_name(kAllMetrics[k]))] = m;
        }
        j["ranks"] = ranks;
    }

    const bool has_default = std::any_of(report.summaries.begin(), report.summaries.end(),
                                         [](const VariantSummary& s) { return s.variant == Variant::default_learner; });
    if (has_default && report.summaries.size() > 1) {
        const std::vector<CellSamples> base{cell_samples(report, Variant::default_learner)};
        Json tables = Json::array();
        for (const auto& s : report.summaries) {
            if (s.variant == Variant::default_learner) continue;
            const std::vector<CellSamples> subject{cell_samples(report, s.variant)};
            tables.push_back(compare_json(compare(to_string(s.variant), subject, "default", base)));
        }
        j["versus_default"] = tables;
    }
    j["config"] = config_to_json(report.config);
    return j;
}

Json timings_json(const EvalReport& report) {
    Json j;
    j["kind"] = "timings";
    j["name"] = report.config.name;
    j["runtime_seconds"] = report.runtime_seconds;
    Json variants = Json::array();
    std::vector<std::pair<double, std::string>> order;
    for (const auto& s : report.summaries) {
        double pl = 0.0;
        for (const auto* r : report.records_for(s.variant)) pl += r->pseudo_label_seconds;
        const double total = report.pipeline_seconds(s.variant);
        variants.push_back({{"variant", to_string(s.variant)}, {"pipeline_seconds", total}, {"pseudo_label_seconds", pl}});
        order.emplace_back(total, to_string(s.variant));
    }
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    Json slowest_first = Json::array();
    for (const auto& o : order) slowest_first.push_back(o.second);
    j["variants"] = variants;
    j["slowest_first"] = slowest_first;
    return j;
}

Json sweep_json(const std::vector<SweepRow>& rows) {
    Json j;
    j["kind"] = "sweep";
    Json out = Json::array();
    for (const auto& row : rows) {
        for (const auto& s : row.report.summaries) {
            out.push_back({{"labeled_fraction", row.labeled_fraction},
                           {"variant", to_string(s.variant)},
                           {"records", s.records},
                           {"medians", metrics_json(s.medians)}});
        }
    }
    j["rows"] = out;
    if (!rows.empty()) {
        Json cfg = config_to_json(rows.front().report.config);
        cfg.erase("labeled_fraction");
        Json fractions = Json::array();
        for (const auto& row : rows) fractions.push_back(row.labeled_fraction);
        cfg["labeled_fractions"] = fractions;
        j["config"] = cfg;
    }
    return j;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    for (const auto& l : lines) out << l.dump() << '\n';
}

std::vector<Json> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::vector<Json> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            out.push_back(Json::parse(line));
        } catch (const Json::parse_error& e) {
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

void write_json(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::vector<StoredRecord> read_records(const std::filesystem::path& jsonl) {
    std::vector<StoredRecord> out;
    for (const auto& j : read_jsonl(jsonl)) {
        if (j.value("kind", "") == "fold") out.push_back(stored_record_from_json(j));
    }
    return out;
}

std::vector<AlgorithmSamples> group_samples(const std::vector<StoredRecord>& records) {
    std::vector<AlgorithmSamples> out;
    for (const auto& r : records) {
        auto alg = std::find_if(out.begin(), out.end(), [&](const AlgorithmSamples& a) { return a.algorithm == r.variant; });
        if (alg == out.end()) {
            out.push_back({r.variant, {}});
            alg = std::prev(out.end());
        }
        const std::string dataset = r.dataset + " @ " + shortest(r.labeled_fraction);
        auto cell = std::find_if(alg->cells.begin(), alg->cells.end(), [&](const CellSamples& c) {
            return c.dataset == dataset && c.protected_attr == r.protected_attr && c.learner == r.learner;
        });
        if (cell == alg->cells.end()) {
            alg->cells.push_back({dataset, r.protected_attr, r.learner, {}});
            cell = std::prev(alg->cells.end());
        }
        for (std::size_t k = 0; k < kMetricCount; ++k) {
            if (r.metrics.values[k]) cell->values[k].push_back(*r.metrics.values[k]);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tables

TableFormat parse_table_format(const std::string& name) {
    if (name == "text") return TableFormat::text;
    if (name == "csv") return TableFormat::csv;
    if (name == "json") return TableFormat::json;
    throw ConfigError("unknown format '" + name + "' (expected text, csv or json)");
}

namespace {

std::string cell_text(const Json& v, bool full_precision) {
    if (v.is_null()) return "n/a";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) {
        if (full_precision) return shortest(v.get<double>());
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", v.get<double>());
        return buf;
    }
    return v.dump();
}

}  // namespace

std::string render(const Table& t, TableFormat format) {
    std::ostringstream out;
    switch (format) {
        case TableFormat::json: {
            Json rows = Json::array();
            for (const auto& row : t.rows) {
                Json o = Json::object();
                for (std::size_t c = 0; c < t.headers.size(); ++c) o[t.headers[c]] = row.at(c);
                rows.push_back(o);
            }
            out << rows.dump(2) << '\n';
            break;
        }
        case TableFormat::csv: {
            for (std::size_t c = 0; c < t.headers.size(); ++c) out << (c ? "," : "") << format_csv_cell(t.headers[c]);
            out << '\n';
            for (const auto& row : t.rows) {
                for (std::size_t c = 0; c < row.size(); ++c) {
                    out << (c ? "," : "") << (row[c].is_null() ? "" : format_csv_cell(cell_text(row[c], true)));
                }
                out << '\n';
            }
            break;
        }
        case TableFormat::text: {
            std::vector<std::size_t> width(t.headers.size());
            for (std::size_t c = 0; c < t.headers.size(); ++c) width[c] = t.headers[c].size();
            for (const auto& row : t.rows) {
                for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], cell_text(row[c], false).size());
            }
            auto line = [&](auto get) {
                for (std::size_t c = 0; c < width.size(); ++c) {
                    const std::string s = get(c);
                    const bool numeric = c > 0;
                    if (c) out << "  ";
                    if (numeric) out << std::string(width[c] - s.size(), ' ') << s;
                    else out << s << std::string(width[c] - s.size(), ' ');
                }
                out << '\n';
            };
            line([&](std::size_t c) { return t.headers[c]; });
            std::size_t total = 0;
            for (std::size_t w : width) total += w;
            out << std::string(total + 2 * (width.empty() ? 0 : width.size() - 1), '-') << '\n';
            for (const auto& row : t.rows) line([&](std::size_t c) { return cell_text(row[c], false); });
            break;
        }
    }
    return out.str();
}

Table metrics_table(const std::vector<StoredRecord>& records) {
    std::set<std::string> datasets;
    std::set<double> fractions;
    for (const auto& r : records) {
        datasets.insert(r.dataset + "|" + r.protected_attr + "|" + r.learner);
        fractions.insert(r.labeled_fraction);
    }
    const bool show_dataset = datasets.size() > 1;
    const bool show_fraction = fractions.size() > 1;

    struct Key {
        std::string dataset, protected_attr, learner, variant;
        double fraction;
        bool operator==(const Key&) const = default;
    };
    std::vector<Key> keys;
    std::vector<std::array<std::vector<std::optional<double>>, kMetricCount>> values;
    for (const auto& r : records) {
        const Key k{r.dataset, r.protected_attr, r.learner, r.variant, r.labeled_fraction};
        auto it = std::find(keys.begin(), keys.end(), k);
        if (it == keys.end()) {
            keys.push_back(k);
            values.emplace_back();
            it = std::prev(keys.end());
        }
        auto& v = values[static_cast<std::size_t>(it - keys.begin())];
        for (std::size_t m = 0; m < kMetricCount; ++m) v[m].push_back(r.metrics.values[m]);
    }

    Table t;
    if (show_dataset) t.headers.insert(t.headers.end(), {"Dataset", "Protected", "Learner"});
    if (show_fraction) t.headers.push_back("Labeled");
    t.headers.push_back("Variant");
    for (Metric m : kAllMetrics) t.headers.emplace_back(metric_title(m));
    for (std::size_t i = 0; i < keys.size(); ++i) {
        std::vector<Json> row;
        if (show_dataset) row.insert(row.end(), {keys[i].dataset, keys[i].protected_attr, keys[i].learner});
        if (show_fraction) row.emplace_back(keys[i].fraction);
        row.emplace_back(keys[i].variant);
        for (std::size_t m = 0; m < kMetricCount; ++m) {
            const auto med = median(values[i][m]);
            row.push_back(med ? Json(*med) : Json(nullptr));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table summary_table(const Json& summary) {
    Table t;
    t.headers.push_back("Variant");
    for (Metric m : kAllMetrics) t.headers.emplace_back(metric_title(m));
    for (const auto& v : summary.at("variants")) {
        std::vector<Json> row{v.at("variant")};
        for (Metric m : kAllMetrics) row.push_back(v.at("medians").at(std::string(metric_name(m))));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table compare_table(const Json& compare) {
    Table t;
    t.headers = {"Comparison", "Metric", "Win", "Tie", "Loss"};
    const Json& tables = compare.contains("tables") ? compare.at("tables") : compare.at("versus_default");
    for (const auto& c : tables) {
        const std::string label = c.at("subject").get<std::string>() + " vs " + c.at("baseline").get<std::string>();
        for (Metric m : kAllMetrics) {
            const Json& w = c.at("per_metric").at(std::string(metric_name(m)));
            t.rows.push_back({label, std::string(metric_title(m)), w.at("win"), w.at("tie"), w.at("loss")});
        }
        const Json& w = c.at("total");
        t.rows.push_back({label, "Total", w.at("win"), w.at("tie"), w.at("loss")});
    }
    return t;
}

Table sweep_table(const Json& sweep) {
    Table t;
    t.headers = {"Labeled", "Variant"};
    const std::array<Metric, 4> cols{Metric::accuracy, Metric::f1, Metric::aod, Metric::eod};
    for (Metric m : cols) t.headers.emplace_back(metric_title(m));
    for (const auto& r : sweep.at("rows")) {
        std::vector<Json> row{r.at("labeled_fraction"), r.at("variant")};
        for (Metric m : cols) row.push_back(r.at("medians").at(std::string(metric_name(m))));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table timings_table(const Json& timings) {
    Table t;
    t.headers = {"Variant", "Pipeline seconds", "Pseudo-label seconds"};
    for (const auto& v : timings.at("variants")) {
        t.rows.push_back({v.at("variant"), v.at("pipeline_seconds"), v.at("pseudo_label_seconds")});
    }
    return t;
}

}  // namespace fairssl
