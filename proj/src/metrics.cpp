#include "fairssl/metrics.hpp"

#include "fairssl/error.hpp"

#include <cmath>
#include <string>

namespace fairssl {

namespace {

void check_binary(std::span<const int> v, const char* what) {
    for (int x : v) {
        if (x != 0 && x != 1) throw DataError(std::string(what) + " values must be 0 or 1");
    }
}

double ratio_or_zero(std::size_t num, std::size_t den, bool& degenerate) {
    if (den == 0) {
        degenerate = true;
        return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

std::optional<double> ratio(std::size_t num, std::size_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

std::optional<double> abs_of(const std::optional<double>& v) {
    if (!v) return std::nullopt;
    return std::abs(*v);
}

}  // namespace

ConfusionCounts confusion(std::span<const int> preds, std::span<const int> truth) {
    if (preds.size() != truth.size()) throw DataError("prediction and truth lengths differ");
    check_binary(preds, "prediction");
    check_binary(truth, "truth");
    ConfusionCounts c;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (truth[i] == 1) {
            (preds[i] == 1 ? c.tp : c.fn)++;
        } else {
            (preds[i] == 1 ? c.fp : c.tn)++;
        }
    }
    return c;
}

PerformanceMetrics performance_metrics(const ConfusionCounts& c) {
    if (c.total() == 0) throw DataError("cannot score an empty prediction set");
    PerformanceMetrics m;
    m.recall = ratio_or_zero(c.tp, c.tp + c.fn, m.recall_degenerate);
    m.false_alarm = ratio_or_zero(c.fp, c.fp + c.tn, m.false_alarm_degenerate);
    m.precision = ratio_or_zero(c.tp, c.tp + c.fp, m.precision_degenerate);
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    const double denom = m.precision + m.recall;
    if (denom > 0.0) {
        m.f1 = 2.0 * m.precision * m.recall / denom;
    } else {
        m.f1 = 0.0;
        m.f1_degenerate = true;
    }
    return m;
}

GroupRates group_rates(std::span<const int> preds, std::span<const int> truth, std::span<const int> protected_attr) {
    if (preds.size() != truth.size() || preds.size() != protected_attr.size()) {
        throw DataError("prediction, truth and protected lengths differ");
    }
    check_binary(preds, "prediction");
    check_binary(truth, "truth");
    check_binary(protected_attr, "protected");
    // [group][truth][pred]
    std::size_t counts[2][2][2] = {};
    for (std::size_t i = 0; i < preds.size(); ++i) counts[protected_attr[i]][truth[i]][preds[i]]++;

    auto rate_for = [&](int g, const char* name) {
        const auto& k = counts[g];
        const std::size_t n = k[0][0] + k[0][1] + k[1][0] + k[1][1];
        if (n == 0) throw DataError(std::string(name) + " group has no rows");
        GroupRate r;
        r.tpr = ratio(k[1][1], k[1][1] + k[1][0]);
        r.fpr = ratio(k[0][1], k[0][1] + k[0][0]);
        r.favorable_rate = static_cast<double>(k[0][1] + k[1][1]) / static_cast<double>(n);
        return r;
    };
    return {rate_for(1, "privileged"), rate_for(0, "unprivileged")};
}

FairnessValues fairness_metrics(const GroupRates& r) {
    const GroupRate& u = r.unprivileged;
    const GroupRate& p = r.privileged;
    FairnessValues f;
    if (u.fpr && p.fpr && u.tpr && p.tpr) f.aod = 0.5 * ((*u.fpr - *p.fpr) + (*u.tpr - *p.tpr));
    if (u.tpr && p.tpr) f.eod = *u.tpr - *p.tpr;
    f.spd = u.favorable_rate - p.favorable_rate;
    if (p.favorable_rate > 0.0) {
        f.di = u.favorable_rate / p.favorable_rate;
    } else {
        f.di_degenerate = true;
    }
    return f;
}

std::optional<double> FairnessValues::abs_aod() const { return abs_of(aod); }
std::optional<double> FairnessValues::abs_eod() const { return abs_of(eod); }
std::optional<double> FairnessValues::abs_spd() const { return abs_of(spd); }
double FairnessValues::one_minus_di() const { return di ? std::abs(1.0 - *di) : 1.0; }

std::string_view metric_name(Metric m) noexcept {
    switch (m) {
        case Metric::recall: return "recall";
        case Metric::false_alarm: return "false_alarm";
        case Metric::precision: return "precision";
        case Metric::accuracy: return "accuracy";
        case Metric::f1: return "f1";
        case Metric::aod: return "aod";
        case Metric::eod: return "eod";
        case Metric::spd: return "spd";
        case Metric::one_minus_di: return "one_minus_di";
    }
    return "";
}

std::string_view metric_title(Metric m) noexcept {
    switch (m) {
        case Metric::recall: return "Recall (+)";
        case Metric::false_alarm: return "False alarm (-)";
        case Metric::precision: return "Precision (+)";
        case Metric::accuracy: return "Accuracy (+)";
        case Metric::f1: return "F1 Score (+)";
        case Metric::aod: return "AOD (-)";
        case Metric::eod: return "EOD (-)";
        case Metric::spd: return "SPD (-)";
        case Metric::one_minus_di: return "DI (-)";
    }
    return "";
}

bool higher_is_better(Metric m) noexcept {
    switch (m) {
        case Metric::recall:
        case Metric::precision:
        case Metric::accuracy:
        case Metric::f1: return true;
        default: return false;
    }
}

bool is_fairness_metric(Metric m) noexcept {
    return m == Metric::aod || m == Metric::eod || m == Metric::spd || m == Metric::one_minus_di;
}

std::optional<Metric> parse_metric(std::string_view name) noexcept {
    for (Metric m : kAllMetrics) {
        if (metric_name(m) == name) return m;
    }
    return std::nullopt;
}

MetricRecord evaluate_predictions(std::span<const int> preds, std::span<const int> truth,
                                  std::span<const int> protected_attr) {
    const PerformanceMetrics perf = performance_metrics(confusion(preds, truth));
    const FairnessValues fair = fairness_metrics(group_rates(preds, truth, protected_attr));
    MetricRecord rec;
    rec[Metric::recall] = perf.recall;
    rec[Metric::false_alarm] = perf.false_alarm;
    rec[Metric::precision] = perf.precision;
    rec[Metric::accuracy] = perf.accuracy;
    rec[Metric::f1] = perf.f1;
    rec[Metric::aod] = fair.abs_aod();
    rec[Metric::eod] = fair.abs_eod();
    rec[Metric::spd] = fair.abs_spd();
    rec[Metric::one_minus_di] = fair.one_minus_di();
    return rec;
}

}  // namespace fairssl
