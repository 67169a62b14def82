#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace fairssl {

/// Cell counts with favorable (1) as the positive class.
struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const noexcept { return tp + fp + tn + fn; }
    bool operator==(const ConfusionCounts&) const = default;
};

ConfusionCounts confusion(std::span<const int> preds, std::span<const int> truth);

struct PerformanceMetrics {
    double recall = 0.0;
    double false_alarm = 0.0;
    double precision = 0.0;
    double accuracy = 0.0;
    double f1 = 0.0;
    // Set when the metric's denominator was zero and the value was forced to 0.
    bool recall_degenerate = false;
    bool false_alarm_degenerate = false;
    bool precision_degenerate = false;
    bool f1_degenerate = false;
};

PerformanceMetrics performance_metrics(const ConfusionCounts& c);

/// Per-group rates; std::nullopt stands for a zero denominator.
struct GroupRate {
    std::optional<double> tpr;
    std::optional<double> fpr;
    double favorable_rate = 0.0;  // P[pred = 1 | group]
};

struct GroupRates {
    GroupRate privileged;
    GroupRate unprivileged;
};

/// Throws DataError naming the group when one protected group has no rows.
GroupRates group_rates(std::span<const int> preds, std::span<const int> truth, std::span<const int> protected_attr);

struct FairnessValues {
    // Signed, unprivileged minus privileged.
    std::optional<double> aod;
    std::optional<double> eod;
    std::optional<double> spd;
    std::optional<double> di;  // unprivileged / privileged favorable rate
    bool di_degenerate = false;

    // Lower-is-better reported forms: |aod|, |eod|, |spd|, |1 - di|. A zero DI
    // denominator reports |1 - di| = 1.
    std::optional<double> abs_aod() const;
    std::optional<double> abs_eod() const;
    std::optional<double> abs_spd() const;
    double one_minus_di() const;
};

FairnessValues fairness_metrics(const GroupRates& r);

/// The nine reported metrics, in table order.
enum class Metric : std::size_t {
    recall,
    false_alarm,
    precision,
    accuracy,
    f1,
    aod,
    eod,
    spd,
    one_minus_di,
};

inline constexpr std::size_t kMetricCount = 9;
inline constexpr std::array<Metric, kMetricCount> kAllMetrics{
    Metric::recall, Metric::false_alarm, Metric::precision, Metric::accuracy, Metric::f1,
    Metric::aod,    Metric::eod,         Metric::spd,       Metric::one_minus_di};

std::string_view metric_name(Metric m) noexcept;
std::string_view metric_title(Metric m) noexcept;  // column header, e.g. "AOD (-)"
bool higher_is_better(Metric m) noexcept;
bool is_fairness_metric(Metric m) noexcept;
std::optional<Metric> parse_metric(std::string_view name) noexcept;

/// One row of reported values; nullopt marks an undefined fairness value.
struct MetricRecord {
    std::array<std::optional<double>, kMetricCount> values{};

    std::optional<double>& operator[](Metric m) { return values[static_cast<std::size_t>(m)]; }
    const std::optional<double>& operator[](Metric m) const { return values[static_cast<std::size_t>(m)]; }
    bool operator==(const MetricRecord&) const = default;
};

MetricRecord evaluate_predictions(std::span<const int> preds, std::span<const int> truth,
                                  std::span<const int> protected_attr);

}  // namespace fairssl
