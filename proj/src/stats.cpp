#include "fairssl/stats.hpp"

#include "fairssl/error.hpp"
#include "fairssl/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fairssl {

double median(std::span<const double> values) {
    if (values.empty()) throw DataError("median of an empty sample");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::optional<double> median(std::span<const std::optional<double>> values) {
    std::vector<double> defined;
    for (const auto& v : values) {
        if (v) defined.push_back(*v);
    }
    if (defined.empty()) return std::nullopt;
    return median(defined);
}

double mean(std::span<const double> values) {
    if (values.empty()) throw DataError("mean of an empty sample");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double cliffs_delta(std::span<const double> xs, std::span<const double> ys) {
    if (xs.empty() || ys.empty()) throw DataError("Cliff's delta of an empty sample");
    long long more = 0;
    long long less = 0;
    for (double x : xs) {
        for (double y : ys) {
            if (x > y) ++more;
            else if (x < y) ++less;
        }
    }
    return static_cast<double>(more - less) / (static_cast<double>(xs.size()) * static_cast<double>(ys.size()));
}

namespace {

double variance(std::span<const double> v, double m) {
    if (v.size() < 2) return 0.0;
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

// Welch statistic with differences below `eps` treated as exact zeros, so
// constant samples behave the same after a shift.
double welch(std::span<const double> a, std::span<const double> b, double eps) {
    const double ma = mean(a);
    const double mb = mean(b);
    const double diff = std::abs(ma - mb);
    const double se = std::sqrt(variance(a, ma) / static_cast<double>(a.size()) +
                                variance(b, mb) / static_cast<double>(b.size()));
    if (diff <= eps) return 0.0;
    if (se <= eps) return std::numeric_limits<double>::infinity();
    return diff / se;
}

double scale_of(std::span<const double> a, std::span<const double> b) {
    double s = 1.0;
    for (double x : a) s = std::max(s, std::abs(x));
    for (double x : b) s = std::max(s, std::abs(x));
    return s;
}

}  // namespace

double bootstrap_p_value(std::span<const double> xs, std::span<const double> ys, const BootstrapConfig& cfg) {
    if (xs.empty() || ys.empty()) throw DataError("bootstrap of an empty sample");
    if (cfg.resamples == 0) throw ConfigError("bootstrap needs at least one resample");
    std::vector<double> a(xs.begin(), xs.end());
    std::vector<double> b(ys.begin(), ys.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double eps = 1e-9 * scale_of(a, b);
    const double observed = welch(a, b, eps);

    std::vector<double> pooled(a);
    pooled.insert(pooled.end(), b.begin(), b.end());
    const double grand = mean(pooled);
    const double ma = mean(a);
    const double mb = mean(b);
    for (double& x : a) x = x - ma + grand;
    for (double& x : b) x = x - mb + grand;

    Rng rng(cfg.seed);
    std::vector<double> ra(a.size());
    std::vector<double> rb(b.size());
    std::size_t extreme = 0;
    for (std::size_t k = 0; k < cfg.resamples; ++k) {
        for (auto& x : ra) x = a[uniform_index(rng, a.size())];
        for (auto& x : rb) x = b[uniform_index(rng, b.size())];
        if (welch(ra, rb, eps) >= observed) ++extreme;
    }
    return static_cast<double>(extreme) / static_cast<double>(cfg.resamples);
}

namespace {

struct SkGroup {
    std::size_t input = 0;
    double mean = 0.0;
    const std::vector<double>* values = nullptr;
};

std::vector<double> pool(std::span<const SkGroup> groups) {
    std::vector<double> out;
    for (const auto& g : groups) out.insert(out.end(), g.values->begin(), g.values->end());
    return out;
}

void split(std::span<const SkGroup> groups, const BootstrapConfig& cfg, std::vector<std::size_t>& cuts,
           std::size_t offset) {
    if (groups.size() < 2) return;
    const std::vector<double> all = pool(groups);
    const double mu = mean(all);
    double best_ss = -1.0;
    std::size_t best_cut = 0;
    for (std::size_t cut = 1; cut < groups.size(); ++cut) {
        const auto left = pool(groups.first(cut));
        const auto right = pool(groups.subspan(cut));
        const double ml = mean(left);
        const double mr = mean(right);
        const double ss = static_cast<double>(left.size()) * (ml - mu) * (ml - mu) +
                          static_cast<double>(right.size()) * (mr - mu) * (mr - mu);
        if (ss > best_ss) {
            best_ss = ss;
            best_cut = cut;
        }
    }
    const auto left = pool(groups.first(best_cut));
    const auto right = pool(groups.subspan(best_cut));
    const bool significant = bootstrap_p_value(left, right, cfg) < cfg.alpha;
    const bool non_negligible = std::abs(cliffs_delta(left, right)) >= kNegligibleDelta;
    if (!significant || !non_negligible) return;
    cuts.push_back(offset + best_cut);
    split(groups.first(best_cut), cfg, cuts, offset);
    split(groups.subspan(best_cut), cfg, cuts, offset + best_cut);
}

}  // namespace

std::vector<RankedGroup> scott_knott(std::span<const NamedSample> groups, const BootstrapConfig& cfg) {
    if (groups.empty()) throw DataError("Scott-Knott needs at least one group");
    std::vector<SkGroup> sorted;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (groups[i].values.empty()) throw DataError("Scott-Knott group '" + groups[i].name + "' is empty");
        sorted.push_back({i, mean(groups[i].values), &groups[i].values});
    }
    std::stable_sort(sorted.begin(), sorted.end(), [](const SkGroup& a, const SkGroup& b) { return a.mean < b.mean; });

    std::vector<std::size_t> cuts;
    split(sorted, cfg, cuts, 0);
    std::sort(cuts.begin(), cuts.end());

    std::vector<RankedGroup> out(groups.size());
    int rank = 1;
    std::size_t next_cut = 0;
    for (std::size_t pos = 0; pos < sorted.size(); ++pos) {
        if (next_cut < cuts.size() && cuts[next_cut] == pos) {
            ++rank;
            ++next_cut;
        }
        const auto& g = sorted[pos];
        out[g.input] = {groups[g.input].name, rank, g.mean};
    }
    return out;
}

namespace {

bool same_cell(const CellSamples& a, const CellSamples& b) {
    return a.dataset == b.dataset && a.protected_attr == b.protected_attr && a.learner == b.learner;
}

}  // namespace

CompareTable compare(const std::string& subject, std::span<const CellSamples> subject_cells,
                     const std::string& baseline, std::span<const CellSamples> baseline_cells,
                     const BootstrapConfig& cfg) {
    if (subject_cells.size() != baseline_cells.size()) {
        throw DataError(subject + " and " + baseline + " cover different numbers of cells");
    }
    CompareTable table;
    table.subject = subject;
    table.baseline = baseline;
    for (const auto& sc : subject_cells) {
        const auto it = std::find_if(baseline_cells.begin(), baseline_cells.end(),
                                     [&](const CellSamples& b) { return same_cell(sc, b); });
        if (it == baseline_cells.end()) {
            throw DataError(baseline + " has no results for " + sc.dataset + "/" + sc.protected_attr + "/" + sc.learner);
        }
        ++table.cells;
        for (std::size_t k = 0; k < kMetricCount; ++k) {
            const Metric m = kAllMetrics[k];
            WinTieLoss& w = table.per_metric[k];
            const auto& xs = sc.values[k];
            const auto& ys = it->values[k];
            if (xs.empty() || ys.empty()) {
                warn(std::string("no defined values for ") + std::string(metric_name(m)) + " in " + sc.dataset +
                     "; counted as a tie");
                ++w.tie;
                continue;
            }
            const std::vector<NamedSample> samples{{subject, xs}, {baseline, ys}};
            const auto ranks = scott_knott(samples, cfg);
            if (ranks[0].rank == ranks[1].rank) {
                ++w.tie;
                continue;
            }
            const bool subject_higher = ranks[0].rank > ranks[1].rank;
            (subject_higher == higher_is_better(m) ? w.win : w.loss)++;
        }
    }
    for (const auto& w : table.per_metric) {
        table.total.win += w.win;
        table.total.tie += w.tie;
        table.total.loss += w.loss;
    }
    return table;
}

CellSamples cell_samples(const EvalReport& report, Variant variant) {
    CellSamples cs;
    cs.dataset = report.config.dataset;
    cs.protected_attr = report.config.protected_attr;
    cs.learner = to_string(report.config.learner);
    for (const auto* r : report.records_for(variant)) {
        for (std::size_t k = 0; k < kMetricCount; ++k) {
            if (r->metrics.values[k]) cs.values[k].push_back(*r->metrics.values[k]);
        }
    }
    return cs;
}

}  // namespace fairssl
