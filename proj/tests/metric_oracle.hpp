#pragma once

// Brute-force metric counter written independently of src/metrics.cpp. Each
// value is kept as an integer ratio and converted to double only at the end.

#include "fairssl/metrics.hpp"

#include <cstdint>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <vector>

namespace fairssl::testing {

struct Ratio {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Ratio of(std::int64_t n, std::int64_t d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
        return {n / (g ? g : 1), d / (g ? g : 1)};
    }
    Ratio operator-(const Ratio& o) const { return of(num * o.den - o.num * den, den * o.den); }
    Ratio operator+(const Ratio& o) const { return of(num * o.den + o.num * den, den * o.den); }
    Ratio half() const { return of(num, den * 2); }
    Ratio abs() const { return {num < 0 ? -num : num, den}; }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

inline std::optional<Ratio> safe_ratio(std::int64_t n, std::int64_t d) {
    if (d == 0) return std::nullopt;
    return Ratio::of(n, d);
}

/// Oracle result; `group_missing` means the library must throw instead.
struct OracleMetrics {
    bool group_missing = false;
    MetricRecord record;
};

inline OracleMetrics oracle_metrics(const std::vector<int>& pred, const std::vector<int>& truth,
                                    const std::vector<int>& prot) {
    OracleMetrics out;
    std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
    // Per group: positives, true positives, negatives, false positives, size, predicted favorable.
    std::int64_t pos[2] = {}, tpg[2] = {}, neg[2] = {}, fpg[2] = {}, size[2] = {}, fav[2] = {};
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const int g = prot[i];
        size[g] += 1;
        fav[g] += pred[i];
        if (truth[i] == 1) {
            pos[g] += 1;
            tpg[g] += pred[i];
            if (pred[i] == 1) ++tp; else ++fn;
        } else {
            neg[g] += 1;
            fpg[g] += pred[i];
            if (pred[i] == 1) ++fp; else ++tn;
        }
    }
    if (size[0] == 0 || size[1] == 0) {
        out.group_missing = true;
        return out;
    }
    auto zero_if_undefined = [](std::optional<Ratio> r) { return r ? r->value() : 0.0; };
    MetricRecord& m = out.record;
    m[Metric::recall] = zero_if_undefined(safe_ratio(tp, tp + fn));
    m[Metric::false_alarm] = zero_if_undefined(safe_ratio(fp, fp + tn));
    m[Metric::precision] = zero_if_undefined(safe_ratio(tp, tp + fp));
    m[Metric::accuracy] = Ratio::of(tp + tn, tp + fp + tn + fn).value();
    // Harmonic mean of precision and recall reduces to 2TP / (2TP + FP + FN).
    m[Metric::f1] = zero_if_undefined(safe_ratio(2 * tp, 2 * tp + fp + fn));

    const auto tpr_u = safe_ratio(tpg[0], pos[0]);
    const auto tpr_p = safe_ratio(tpg[1], pos[1]);
    const auto fpr_u = safe_ratio(fpg[0], neg[0]);
    const auto fpr_p = safe_ratio(fpg[1], neg[1]);
    if (tpr_u && tpr_p && fpr_u && fpr_p) {
        m[Metric::aod] = (((*fpr_u - *fpr_p) + (*tpr_u - *tpr_p)).half()).abs().value();
    }
    if (tpr_u && tpr_p) m[Metric::eod] = (*tpr_u - *tpr_p).abs().value();
    const Ratio fav_u = Ratio::of(fav[0], size[0]);
    const Ratio fav_p = Ratio::of(fav[1], size[1]);
    m[Metric::spd] = (fav_u - fav_p).abs().value();
    if (fav[1] == 0) {
        m[Metric::one_minus_di] = 1.0;
    } else {
        // DI = (fav_u_count / size_u) / (fav_p_count / size_p)
        const Ratio di = Ratio::of(fav[0] * size[1], size[0] * fav[1]);
        m[Metric::one_minus_di] = (Ratio{1, 1} - di).abs().value();
    }
    return out;
}

/// Largest absolute difference between two records; infinity when the defined
/// sets differ.
inline double record_distance(const MetricRecord& a, const MetricRecord& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < kMetricCount; ++k) {
        if (a.values[k].has_value() != b.values[k].has_value()) return 1e300;
        if (a.values[k]) worst = std::max(worst, std::abs(*a.values[k] - *b.values[k]));
    }
    return worst;
}

}  // namespace fairssl::testing
