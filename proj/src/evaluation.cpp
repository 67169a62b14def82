#include "fairssl/evaluation.hpp"

#include "fairssl/error.hpp"
#include "fairssl/random.hpp"
#include "fairssl/stats.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace fairssl {

Variant parse_variant(const std::string& code) {
    if (code == "default") return Variant::default_learner;
    if (code == "ST") return Variant::self_training;
    if (code == "LP") return Variant::label_propagation;
    if (code == "LS") return Variant::label_spreading;
    if (code == "CT") return Variant::co_training;
    if (code == "best") return Variant::best;
    throw ConfigError("unknown variant '" + code + "' (expected default, ST, LP, LS, CT or best)");
}

const char* to_string(Variant v) noexcept {
    switch (v) {
        case Variant::default_learner: return "default";
        case Variant::self_training: return "ST";
        case Variant::label_propagation: return "LP";
        case Variant::label_spreading: return "LS";
        case Variant::co_training: return "CT";
        case Variant::best: return "best";
    }
    return "default";
}

Variant to_variant(SslVariant v) noexcept {
    switch (v) {
        case SslVariant::self_training: return Variant::self_training;
        case SslVariant::label_propagation: return Variant::label_propagation;
        case SslVariant::label_spreading: return Variant::label_spreading;
        case SslVariant::co_training: return Variant::co_training;
    }
    return Variant::self_training;
}

std::optional<SslVariant> ssl_variant(Variant v) noexcept {
    switch (v) {
        case Variant::self_training: return SslVariant::self_training;
        case Variant::label_propagation: return SslVariant::label_propagation;
        case Variant::label_spreading: return SslVariant::label_spreading;
        case Variant::co_training: return SslVariant::co_training;
        default: return std::nullopt;
    }
}

void ExperimentConfig::validate() const {
    if (folds < 2) throw ConfigError("folds must be at least 2");
    if (repeats < 1) throw ConfigError("repeats must be at least 1");
    if (!(labeled_fraction > 0.0 && labeled_fraction <= 1.0)) throw ConfigError("labeled_fraction must lie in (0, 1]");
    if (variants.empty()) throw ConfigError("at least one variant is required");
    for (std::size_t i = 0; i < variants.size(); ++i) {
        for (std::size_t j = i + 1; j < variants.size(); ++j) {
            if (variants[i] == variants[j]) throw ConfigError(std::string("duplicate variant ") + to_string(variants[i]));
        }
    }
    if (dataset.empty()) throw ConfigError("dataset is required");
    if (dataset != kSyntheticDataset && schema.empty()) throw ConfigError("a CSV dataset needs a schema file");
    if (dataset == kSyntheticDataset && synthetic.n < 40) throw ConfigError("synthetic.n must be at least 40");
    ssl.validate();
    balancer.validate();
    if (!(training.learning_rate > 0.0) || training.epochs < 1 || training.l2 < 0.0) {
        throw ConfigError("training needs learning_rate > 0, epochs >= 1 and l2 >= 0");
    }
}

TabularDataset load_dataset(const ExperimentConfig& cfg) {
    if (cfg.dataset == kSyntheticDataset) {
        if (!cfg.protected_attr.empty() && cfg.protected_attr != "group") {
            throw ConfigError("the synthetic dataset has a single protected attribute 'group'");
        }
        return synth_biased_dataset(cfg.synthetic.n, cfg.synthetic.bias, cfg.synthetic.seed);
    }
    if (!std::filesystem::exists(cfg.schema)) throw ConfigError("schema file not found: " + cfg.schema);
    if (!std::filesystem::exists(cfg.dataset)) throw ConfigError("dataset file not found: " + cfg.dataset);
    const DatasetSchema schema = load_schema_json(cfg.schema);
    return load_csv(cfg.dataset, schema, cfg.protected_attr);
}

FoldSplit make_fold(const TabularDataset& ds, std::span<const std::size_t> assignment, std::size_t fold) {
    if (assignment.size() != ds.rows()) throw DataError("fold assignment does not cover the dataset");
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    for (std::size_t i = 0; i < assignment.size(); ++i) (assignment[i] == fold ? test_rows : train_rows).push_back(i);
    if (test_rows.empty() || train_rows.empty()) throw DataError("fold " + std::to_string(fold) + " is empty");
    const TabularDataset train = ds.subset(train_rows);
    const MinMaxScaler scaler = fit_min_max(train);
    return {apply_min_max(train, scaler), apply_min_max(ds.subset(test_rows), scaler)};
}

std::uint64_t stage_seed(std::uint64_t base, std::size_t repeat, std::size_t fold, Stage stage) {
    return derive_seed(base, {repeat, fold, static_cast<std::uint64_t>(stage)});
}

std::uint64_t fold_seed(std::uint64_t base, std::size_t repeat) {
    return derive_seed(base, {repeat, static_cast<std::uint64_t>(Stage::folds)});
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

template <class F>
auto staged(const char* stage, F&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(stage, e.what());
    }
}

void append_ids(std::vector<std::int64_t>& out, const TabularDataset& ds, std::span<const std::size_t> rows) {
    for (std::size_t r : rows) out.push_back(ds.row_ids[r]);
}

void append_all_ids(std::vector<std::int64_t>& out, const TabularDataset& ds) {
    out.insert(out.end(), ds.row_ids.begin(), ds.row_ids.end());
}

TrainingConfig with_seed(TrainingConfig t, std::uint64_t seed) {
    t.seed = seed;
    return t;
}

}  // namespace

FairSslPrep prepare_fair_ssl(const TabularDataset& train, const ExperimentConfig& cfg, std::uint64_t situation_seed,
                             std::uint64_t initial_seed, PipelineTrace* trace) {
    FairSslPrep prep;
    if (trace) append_all_ids(trace->situation_rows, train);
    prep.situation =
        staged("situation_test", [&] { return situation_test(train, situation_seed, cfg.training); });
    prep.selection = staged("initial_sample", [&] {
        return sample_balanced_initial(train, prep.situation.kept, cfg.labeled_fraction, initial_seed);
    });
    return prep;
}

VariantOutcome train_fair_ssl(const TabularDataset& train, const FairSslPrep& prep, SslVariant variant,
                              const ExperimentConfig& cfg, std::uint64_t ssl_seed, std::uint64_t balance_seed,
                              std::uint64_t fit_seed, PipelineTrace* trace) {
    const auto start = Clock::now();
    VariantOutcome out;
    SSLConfig ssl_cfg = cfg.ssl;
    ssl_cfg.training = with_seed(cfg.training, ssl_seed);
    if (trace) append_all_ids(trace->ssl_rows, train);
    const PseudoLabelResult pl =
        staged("pseudo_label", [&] { return pseudo_label(variant, prep.selection.labels, train, ssl_cfg); });
    out.pseudo_label_seconds = pl.runtime_seconds;
    out.pseudo_labeled = pl.accepted;

    const std::vector<std::size_t> labeled = pl.labels.labeled_rows();
    TabularDataset labeled_ds = train.subset(labeled);
    for (std::size_t i = 0; i < labeled.size(); ++i) {
        labeled_ds.labels(static_cast<Eigen::Index>(i)) = pl.labels[labeled[i]].label;
    }
    if (trace) append_ids(trace->balance_rows, train, labeled);

    BalancerConfig bal_cfg = cfg.balancer;
    bal_cfg.seed = balance_seed;
    const BalanceResult balanced = staged("balance", [&] { return fair_smote_balance(labeled_ds, bal_cfg); });
    out.synthetic_rows = balanced.provenance.size();

    out.model = staged("fit", [&] {
        return fit_learner(cfg.learner, balanced.data.features, balanced.data.labels, with_seed(cfg.training, fit_seed));
    });
    out.pipeline_seconds = seconds_since(start);
    return out;
}

std::unique_ptr<Classifier> train_default(const TabularDataset& train, const ExperimentConfig& cfg,
                                          std::uint64_t fit_seed) {
    return staged("fit", [&] {
        return fit_learner(cfg.learner, train.features, train.labels, with_seed(cfg.training, fit_seed));
    });
}

MetricRecord score(const Classifier& model, const TabularDataset& test) {
    return staged("score", [&] {
        const std::vector<int> preds = model.predict(test.features);
        return evaluate_predictions(preds, test.label_vector(), test.protected_vector());
    });
}

double selection_score(const MetricRecord& r) {
    double fairness = 0.0;
    for (Metric m : {Metric::aod, Metric::eod, Metric::spd, Metric::one_minus_di}) fairness += r[m].value_or(1.0);
    return r[Metric::f1].value_or(0.0) - fairness / 4.0;
}

VariantSelection select_best_variant(const TabularDataset& train, const ExperimentConfig& cfg, std::uint64_t seed) {
    const TrainTestSplit split = staged("select", [&] { return split_train_test(train, 0.2, derive_seed(seed, {0})); });
    const TabularDataset inner = train.subset(split.train);
    const TabularDataset validation = train.subset(split.test);
    const FairSslPrep prep = prepare_fair_ssl(inner, cfg, derive_seed(seed, {1}), derive_seed(seed, {2}));

    VariantSelection sel;
    std::optional<double> best;
    for (std::size_t i = 0; i < kAllSslVariants.size(); ++i) {
        const SslVariant v = kAllSslVariants[i];
        const VariantOutcome o =
            train_fair_ssl(inner, prep, v, cfg, derive_seed(seed, {3}), derive_seed(seed, {4}), derive_seed(seed, {5}));
        sel.scores[i] = selection_score(score(*o.model, validation));
        if (!best || sel.scores[i] > *best) {
            best = sel.scores[i];
            sel.chosen = v;
        }
    }
    return sel;
}

std::vector<const FoldRecord*> EvalReport::records_for(Variant v) const {
    std::vector<const FoldRecord*> out;
    for (const auto& r : records) {
        if (r.variant == v) out.push_back(&r);
    }
    return out;
}

const VariantSummary& EvalReport::summary(Variant v) const {
    for (const auto& s : summaries) {
        if (s.variant == v) return s;
    }
    throw Error(std::string("report has no variant ") + to_string(v));
}

double EvalReport::pipeline_seconds(Variant v) const {
    double total = 0.0;
    for (const auto* r : records_for(v)) total += r->pipeline_seconds;
    return total;
}

std::size_t configured_threads() {
    if (const char* env = std::getenv("FAIRSSL_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
        warn(std::string("ignoring FAIRSSL_THREADS='") + env + "'");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

std::vector<FoldRecord> run_cell(const TabularDataset& ds, const ExperimentConfig& cfg,
                                 std::span<const std::size_t> assignment, std::size_t repeat, std::size_t fold,
                                 std::vector<std::int64_t>* test_rows, PipelineTrace* trace) {
    const FoldSplit split = staged("fold", [&] { return make_fold(ds, assignment, fold); });
    if (test_rows) append_all_ids(*test_rows, split.test);
    auto seed = [&](Stage s) { return stage_seed(cfg.seed, repeat, fold, s); };

    std::optional<FairSslPrep> prep;
    auto shared_prep = [&]() -> const FairSslPrep& {
        if (!prep) prep = prepare_fair_ssl(split.train, cfg, seed(Stage::situation), seed(Stage::initial), trace);
        return *prep;
    };
    // The trace records each stage once per cell, not once per variant.
    bool traced_variant = false;

    std::vector<FoldRecord> out;
    for (Variant v : cfg.variants) {
        FoldRecord rec;
        rec.variant = v;
        rec.repeat = repeat;
        rec.fold = fold;
        if (v == Variant::default_learner) {
            const auto start = Clock::now();
            const auto model = train_default(split.train, cfg, seed(Stage::fit));
            rec.pipeline_seconds = seconds_since(start);
            rec.metrics = score(*model, split.test);
        } else {
            SslVariant sv;
            if (v == Variant::best) {
                sv = select_best_variant(split.train, cfg, seed(Stage::select)).chosen;
                rec.chosen = sv;
            } else {
                sv = *ssl_variant(v);
            }
            PipelineTrace* t = traced_variant ? nullptr : trace;
            traced_variant = true;
            const VariantOutcome o = train_fair_ssl(split.train, shared_prep(), sv, cfg, seed(Stage::ssl),
                                                    seed(Stage::balance), seed(Stage::fit), t);
            rec.pseudo_label_seconds = o.pseudo_label_seconds;
            rec.pipeline_seconds = o.pipeline_seconds;
            rec.pseudo_labeled = o.pseudo_labeled;
            rec.synthetic_rows = o.synthetic_rows;
            rec.metrics = score(*o.model, split.test);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace

EvalReport repeat_cv(const TabularDataset& ds, const ExperimentConfig& cfg, const RunOptions& options) {
    cfg.validate();
    const auto start = Clock::now();
    const std::size_t cells = cfg.repeats * cfg.folds;

    std::vector<std::vector<std::size_t>> assignments(cfg.repeats);
    for (std::size_t r = 0; r < cfg.repeats; ++r) {
        assignments[r] = staged("folds", [&] { return stratified_folds(ds, cfg.folds, fold_seed(cfg.seed, r)); });
    }

    std::vector<std::vector<FoldRecord>> results(cells);
    if (options.test_rows) options.test_rows->assign(cells, {});
    if (options.traces) options.traces->assign(cells, {});
    std::vector<std::exception_ptr> errors(cells);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};

    auto worker = [&] {
        for (std::size_t c = next++; c < cells && !failed; c = next++) {
            const std::size_t r = c / cfg.folds;
            const std::size_t f = c % cfg.folds;
            try {
                try {
                    results[c] = run_cell(ds, cfg, assignments[r], r, f, options.test_rows ? &(*options.test_rows)[c] : nullptr,
                                          options.traces ? &(*options.traces)[c] : nullptr);
                } catch (const StageError& e) {
                    throw StageError(e.stage(), "repeat " + std::to_string(r) + ", fold " + std::to_string(f) + ": " +
                                                    std::string(e.what()).substr(e.stage().size() + 2));
                }
            } catch (...) {
                errors[c] = std::current_exception();
                failed = true;
            }
        }
    };

    const std::size_t threads = std::min(options.threads > 0 ? options.threads : configured_threads(), cells);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    EvalReport report;
    report.config = cfg;
    for (std::size_t vi = 0; vi < cfg.variants.size(); ++vi) {
        for (std::size_t c = 0; c < cells; ++c) report.records.push_back(results[c][vi]);
    }

    for (Variant v : cfg.variants) {
        VariantSummary s;
        s.variant = v;
        const auto recs = report.records_for(v);
        s.records = recs.size();
        for (Metric m : kAllMetrics) {
            std::vector<std::optional<double>> values;
            for (const auto* r : recs) values.push_back(r->metrics[m]);
            s.medians[m] = median(values);
        }
        report.summaries.push_back(s);
    }
    report.runtime_seconds = seconds_since(start);
    return report;
}

EvalReport repeat_cv(const ExperimentConfig& cfg, const RunOptions& options) {
    cfg.validate();
    return repeat_cv(load_dataset(cfg), cfg, options);
}

EvalReport run_default(const ExperimentConfig& cfg, const RunOptions& options) {
    ExperimentConfig c = cfg;
    c.variants = {Variant::default_learner};
    return repeat_cv(c, options);
}

EvalReport run_fair_ssl(const ExperimentConfig& cfg, const RunOptions& options) {
    ExperimentConfig c = cfg;
    std::erase_if(c.variants, [](Variant v) { return v == Variant::default_learner; });
    if (c.variants.empty()) throw ConfigError("run_fair_ssl needs a Fair-SSL variant (ST, LP, LS, CT or best)");
    return repeat_cv(c, options);
}

std::vector<double> dedupe_fractions(std::span<const double> fractions) {
    std::vector<double> out;
    for (double f : fractions) {
        if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
    }
    return out;
}

std::vector<SweepRow> sweep_labeled_fraction(const ExperimentConfig& cfg, std::span<const double> fractions,
                                             const RunOptions& options) {
    const std::vector<double> unique = dedupe_fractions(fractions);
    if (unique.empty()) throw ConfigError("sweep needs at least one labeled fraction");
    for (double f : unique) {
        if (!(f > 0.0 && f <= 1.0)) throw ConfigError("labeled fractions must lie in (0, 1]");
    }
    cfg.validate();
    const TabularDataset ds = load_dataset(cfg);
    std::vector<SweepRow> rows;
    for (double f : unique) {
        ExperimentConfig c = cfg;
        c.labeled_fraction = f;
        rows.push_back({f, repeat_cv(ds, c, options)});
    }
    return rows;
}

}  // namespace fairssl
