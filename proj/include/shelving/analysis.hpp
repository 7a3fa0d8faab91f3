#pragma once

#include "shelving/emission_record.hpp"
#include "shelving/statistics.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace shelving {

enum class PeriodKind { Bright, Dark };
std::string_view to_string(PeriodKind kind);

struct Period {
    PeriodKind kind = PeriodKind::Bright;
    double start = 0;
    double duration = 0;
    bool interior = false;  // dark period bounded by strong photons on both sides
    double end() const { return start + duration; }
};

/// Alternating bright/dark periods tiling [0, t_max].
struct PeriodSegmentation {
    std::vector<Period> periods;
    std::size_t count(PeriodKind kind) const;
};

/// Gaps between consecutive strong photons (and the run ends 0, t_max) that
/// reach `gap_threshold` are dark; everything else is bright. A record with no
/// strong photon is one dark period.
PeriodSegmentation segment_periods(const EmissionRecord& record, double t_max, double gap_threshold);

/// 20 / (strong photons per unit time over the ensemble); +inf when there are none.
double default_gap_threshold(const Ensemble& ensemble);

/// From every photon (either channel) to the next photon of `channel`.
std::vector<double> waiting_times(const EmissionRecord& record, Channel channel);
std::vector<double> waiting_times(const Ensemble& ensemble, Channel channel);

/// From each `channel` photon to the next `channel` photon.
std::vector<double> renewal_intervals(const EmissionRecord& record, Channel channel);
std::vector<double> renewal_intervals(const Ensemble& ensemble, Channel channel);

struct FitOptions {
    /// Samples below t_min are dropped and the rest shifted by t_min
    /// (left-truncated likelihood). Unset: 1.5 x sample median.
    std::optional<double> t_min;
    int max_iterations = 200;
    double tolerance = 1e-9;  // relative log-likelihood change
    std::size_t min_samples = 1000;
};

struct FitResult {
    double fast_rate = 0;
    double slow_rate = 0;
    double weight = 0;     // fast-component weight of the untruncated mixture
    double goodness = 0;   // KS statistic against the fitted density
    double t_min = 0;
    std::size_t n_used = 0;
    int iterations = 0;
    double log_likelihood = 0;
};

/// Two-exponential maximum likelihood by EM. Throws AnalysisError on too few
/// samples or a degenerate fit (rates within 2x, or an empty component).
FitResult fit_waiting_distribution(std::span<const double> samples, const FitOptions& options = {});

struct DarkStatistics {
    std::size_t count = 0;
    double threshold = 0;
    double raw_mean = 0;
    /// Mean of (duration - threshold): the exponential mean corrected for
    /// only observing gaps above the threshold.
    double mean_duration = 0;
    KsResult exponential_ks;
};

/// Interior dark periods only; censored ones at 0 and t_max are skipped.
DarkStatistics dark_statistics(const Ensemble& ensemble, double gap_threshold);

struct OrderingStatistics {
    std::size_t dark_periods = 0;
    std::size_t weak_before = 0;
    std::size_t weak_after = 0;
    std::size_t no_weak = 0;
    double fraction_before() const { return dark_periods ? double(weak_before) / dark_periods : 0; }
    double fraction_after() const { return dark_periods ? double(weak_after) / dark_periods : 0; }
};

/// For each interior dark period, whether its first weak photon sits nearer
/// the start (before the dark time) or the end (after it).
OrderingStatistics emission_ordering(const Ensemble& ensemble, double gap_threshold);

struct ComparisonStats {
    KsResult strong;
    KsResult weak;
    double bright_mean_ratio = 0;  // a / b
    double dark_mean_ratio = 0;
};

/// KS on same-channel renewal intervals per channel plus period-duration
/// ratios. `gap_threshold` <= 0 uses the default from `a`.
ComparisonStats compare_records(const Ensemble& a, const Ensemble& b, double gap_threshold = 0);

struct Histogram {
    std::vector<double> edges;  // size = counts.size() + 1
    std::vector<std::size_t> counts;
};

/// Log-spaced bins over the positive samples.
Histogram log_histogram(std::span<const double> samples, int bins = 60);
void write_histogram_csv(std::ostream& out, const Histogram& histogram);

/// Oracle rates the report is checked against; zero entries are skipped.
struct RateTargets {
    double fast_rate = 0;
    double slow_rate = 0;
    double weak_tail_rate = 0;
    double mean_dark = 0;
};

struct ReportOptions {
    double gap_threshold = 0;  // <= 0: default
    double rate_tolerance = 0.10;
    double ordering_fraction = 0.99;
    std::string expected_ordering;  // "after", "before" or empty
    FitOptions fit;
};

/// Segmentation, waiting times, fits and pass/fail checks as a JSON document.
/// `histogram` receives the strong-channel waiting-time histogram.
std::string analysis_report_json(const Ensemble& ensemble, const RateTargets& targets, const ReportOptions& options,
                                 Histogram* histogram = nullptr, bool* all_passed = nullptr);

}  // namespace shelving
