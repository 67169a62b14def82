#pragma once

#include "fairssl/evaluation.hpp"
#include "fairssl/metrics.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fairssl {

/// Midpoint of the two central values for even counts. Throws DataError on empty input.
double median(std::span<const double> values);
/// Median of the defined values; nullopt when none is defined.
std::optional<double> median(std::span<const std::optional<double>> values);

double mean(std::span<const double> values);

/// (#(x > y) - #(x < y)) / (|xs| |ys|) over all pairs.
double cliffs_delta(std::span<const double> xs, std::span<const double> ys);

/// Magnitudes below this are negligible.
inline constexpr double kNegligibleDelta = 0.147;

struct BootstrapConfig {
    std::size_t resamples = 1000;
    double alpha = 0.05;
    std::uint64_t seed = 0x5c077;
};

/// Two-sample bootstrap on the Welch statistic, both samples shifted to the
/// pooled mean under the null. Returns the share of resamples at least as
/// extreme as the observed statistic. Samples are sorted first, so the result
/// does not depend on input order.
double bootstrap_p_value(std::span<const double> xs, std::span<const double> ys, const BootstrapConfig& cfg = {});

struct NamedSample {
    std::string name;
    std::vector<double> values;
};

struct RankedGroup {
    std::string name;
    int rank = 1;  // dense from 1, ascending mean
    double mean = 0.0;
};

/// Scott-Knott clustering. Groups are ordered by mean and split recursively at
/// the cut maximizing the between-group sum of squares; a cut survives only if
/// the bootstrap test is significant and Cliff's |delta| is non-negligible.
/// Output follows the input order.
std::vector<RankedGroup> scott_knott(std::span<const NamedSample> groups, const BootstrapConfig& cfg = {});

struct WinTieLoss {
    std::size_t win = 0;
    std::size_t tie = 0;
    std::size_t loss = 0;

    std::size_t total() const noexcept { return win + tie + loss; }
    bool operator==(const WinTieLoss&) const = default;
};

struct CompareTable {
    std::string subject;
    std::string baseline;
    std::array<WinTieLoss, kMetricCount> per_metric{};  // indexed like kAllMetrics
    WinTieLoss total;
    std::size_t cells = 0;
};

/// One algorithm's per-fold values of every metric on one (dataset, protected, learner) cell.
struct CellSamples {
    std::string dataset;
    std::string protected_attr;
    std::string learner;
    std::array<std::vector<double>, kMetricCount> values;
};

/// Scott-Knott on each (cell, metric) pair of samples; the better rank in the
/// metric's direction wins, a shared rank ties. Cells are matched by key and
/// must line up exactly.
CompareTable compare(const std::string& subject, std::span<const CellSamples> subject_cells,
                     const std::string& baseline, std::span<const CellSamples> baseline_cells,
                     const BootstrapConfig& cfg = {});

/// Samples of one variant of a report.
CellSamples cell_samples(const EvalReport& report, Variant variant);

}  // namespace fairssl
