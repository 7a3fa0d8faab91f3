#include "shelving/analysis.hpp"

#include "shelving/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace shelving {

std::string_view to_string(PeriodKind kind) { return kind == PeriodKind::Bright ? "bright" : "dark"; }

std::size_t PeriodSegmentation::count(PeriodKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(periods.begin(), periods.end(), [&](const Period& p) { return p.kind == kind; }));
}

PeriodSegmentation segment_periods(const EmissionRecord& record, double t_max, double gap_threshold) {
    PeriodSegmentation seg;
    if (!(t_max > 0)) return seg;
    std::vector<double> marks{0.0};
    for (const auto& e : record.emissions)
        if (e.channel == Channel::Strong && e.time <= t_max) marks.push_back(e.time);
    const bool any_strong = marks.size() > 1;
    marks.push_back(t_max);
    if (!any_strong) {
        seg.periods.push_back({PeriodKind::Dark, 0.0, t_max, false});
        return seg;
    }
    // Periods are stored as (start, end) marks so that they tile exactly.
    std::vector<std::pair<PeriodKind, std::pair<std::size_t, std::size_t>>> spans;
    for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
        const double gap = marks[i + 1] - marks[i];
        if (gap <= 0) continue;
        const auto kind = gap >= gap_threshold ? PeriodKind::Dark : PeriodKind::Bright;
        if (!spans.empty() && spans.back().first == kind && kind == PeriodKind::Bright)
            spans.back().second.second = i + 1;
        else
            spans.push_back({kind, {i, i + 1}});
    }
    for (const auto& [kind, ends] : spans) {
        const double a = marks[ends.first], b = marks[ends.second];
        const bool interior = ends.first > 0 && ends.second + 1 < marks.size();
        seg.periods.push_back({kind, a, b - a, kind == PeriodKind::Dark && interior});
    }
    return seg;
}

double default_gap_threshold(const Ensemble& ensemble) {
    std::size_t strong = 0;
    for (const auto& r : ensemble.trajectories) strong += r.count(Channel::Strong);
    const double time = ensemble.t_max * static_cast<double>(ensemble.trajectories.size());
    if (strong == 0 || !(time > 0)) return std::numeric_limits<double>::infinity();
    return 20.0 / (static_cast<double>(strong) / time);
}

std::vector<double> waiting_times(const EmissionRecord& record, Channel channel) {
    std::vector<double> out;
    const auto& em = record.emissions;
    if (em.size() < 2) return out;
    // Walk backwards remembering the next photon of the wanted channel.
    double next = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> rev;
    for (auto it = em.rbegin(); it != em.rend(); ++it) {
        if (!std::isnan(next) && next > it->time) rev.push_back(next - it->time);
        if (it->channel == channel) next = it->time;
    }
    out.assign(rev.rbegin(), rev.rend());
    return out;
}

std::vector<double> waiting_times(const Ensemble& ensemble, Channel channel) {
    std::vector<double> out;
    for (const auto& r : ensemble.trajectories) {
        auto w = waiting_times(r, channel);
        out.insert(out.end(), w.begin(), w.end());
    }
    return out;
}

std::vector<double> renewal_intervals(const EmissionRecord& record, Channel channel) {
    std::vector<double> out;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (const auto& e : record.emissions) {
        if (e.channel != channel) continue;
        if (!std::isnan(prev) && e.time > prev) out.push_back(e.time - prev);
        prev = e.time;
    }
    return out;
}

std::vector<double> renewal_intervals(const Ensemble& ensemble, Channel channel) {
    std::vector<double> out;
    for (const auto& r : ensemble.trajectories) {
        auto w = renewal_intervals(r, channel);
        out.insert(out.end(), w.begin(), w.end());
    }
    return out;
}

namespace {

double log_add(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == -std::numeric_limits<double>::infinity()) return a;
    return a + std::log1p(std::exp(b - a));
}

}  // namespace

FitResult fit_waiting_distribution(std::span<const double> samples, const FitOptions& opt) {
    if (samples.size() < opt.min_samples)
        throw AnalysisError("fit needs at least " + std::to_string(opt.min_samples) + " samples, got " +
                            std::to_string(samples.size()));
    const double t_min = opt.t_min ? *opt.t_min : 1.5 * median(samples);
    std::vector<double> x;
    x.reserve(samples.size());
    for (double t : samples)
        if (t >= t_min) x.push_back(t - t_min);
    if (x.size() < opt.min_samples / 4)
        throw AnalysisError("fit: only " + std::to_string(x.size()) + " samples above t_min");
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());

    // Start from the bulk for the fast rate and from the memoryless tail far
    // beyond it for the slow one.
    const double m = std::max(median(x), 1e-300);
    double a = std::log(2.0) / m;
    double b = a / 20, w = 0.99;
    {
        const double q = 20.0 / a;
        const auto first = std::upper_bound(x.begin(), x.end(), q);
        const auto tail = static_cast<double>(x.end() - first);
        if (tail >= 10) {
            double excess = 0;
            for (auto it = first; it != x.end(); ++it) excess += *it - q;
            b = std::min(a / 4, tail / excess);
            w = std::clamp(1.0 - tail / n * std::exp(b * q), 0.5, 1.0 - 1.0 / n);
        }
    }

    FitResult fit;
    double ll_prev = -std::numeric_limits<double>::infinity();
    std::vector<double> resp(x.size());
    for (int it = 1; it <= opt.max_iterations; ++it) {
        const double lw = std::log(w), lw1 = std::log1p(-w), la = std::log(a), lb = std::log(b);
        double ll = 0, sr = 0, srx = 0, sx1 = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double fa = lw + la - a * x[i];
            const double fb = lw1 + lb - b * x[i];
            const double tot = log_add(fa, fb);
            const double g = std::exp(fa - tot);
            ll += tot;
            sr += g;
            srx += g * x[i];
            sx1 += (1 - g) * x[i];
        }
        fit.iterations = it;
        fit.log_likelihood = ll;
        const double r1 = n - sr;
        if (!(sr > 0) || !(r1 > 0) || !(srx > 0) || !(sx1 > 0)) break;
        w = sr / n;
        a = sr / srx;
        b = r1 / sx1;
        if (std::abs(ll - ll_prev) < opt.tolerance * std::abs(ll)) break;
        ll_prev = ll;
    }
    if (a < b) {
        std::swap(a, b);
        w = 1 - w;
    }
    if (!(a >= 2 * b) || !(b > 0) || w * n < 5 || (1 - w) * n < 5)
        throw AnalysisError("degenerate fit (rates " + std::to_string(a) + " and " + std::to_string(b) +
                            ", weight " + std::to_string(w) +
                            "): components not separated; use more samples or a larger rate separation");

    fit.fast_rate = a;
    fit.slow_rate = b;
    fit.t_min = t_min;
    fit.n_used = x.size();
    // Weight of the untruncated mixture: w' = w e^{-a t0} / (w e^{-a t0} + (1-w) e^{-b t0}).
    const double la = std::log(w) + a * t_min, lb = std::log1p(-w) + b * t_min;
    fit.weight = std::exp(la - log_add(la, lb));
    fit.goodness = ks_one_sample(x, [&](double v) {
                       return w * -std::expm1(-a * v) + (1 - w) * -std::expm1(-b * v);
                   }).statistic;
    return fit;
}

DarkStatistics dark_statistics(const Ensemble& ensemble, double gap_threshold) {
    DarkStatistics st;
    st.threshold = gap_threshold;
    std::vector<double> durations, excess;
    for (const auto& r : ensemble.trajectories)
        for (const auto& p : segment_periods(r, ensemble.t_max, gap_threshold).periods)
            if (p.kind == PeriodKind::Dark && p.interior) {
                durations.push_back(p.duration);
                excess.push_back(p.duration - gap_threshold);
            }
    st.count = durations.size();
    if (durations.empty()) return st;
    st.raw_mean = mean(durations);
    st.mean_duration = mean(excess);
    if (st.mean_duration > 0) {
        const double rate = 1.0 / st.mean_duration;
        st.exponential_ks = ks_one_sample(excess, [rate](double v) { return -std::expm1(-rate * v); });
    }
    return st;
}

OrderingStatistics emission_ordering(const Ensemble& ensemble, double gap_threshold) {
    OrderingStatistics st;
    for (const auto& r : ensemble.trajectories) {
        const auto& em = r.emissions;
        for (const auto& p : segment_periods(r, ensemble.t_max, gap_threshold).periods) {
            if (p.kind != PeriodKind::Dark || !p.interior) continue;
            ++st.dark_periods;
            auto it = std::upper_bound(em.begin(), em.end(), p.start,
                                       [](double t, const Emission& e) { return t < e.time; });
            while (it != em.end() && it->time < p.end() && it->channel != Channel::Weak) ++it;
            if (it == em.end() || it->time >= p.end()) ++st.no_weak;
            else if (it->time - p.start < p.end() - it->time) ++st.weak_before;
            else ++st.weak_after;
        }
    }
    return st;
}

namespace {

std::pair<double, double> mean_period_durations(const Ensemble& e, double threshold) {
    std::vector<double> bright, dark;
    for (const auto& r : e.trajectories)
        for (const auto& p : segment_periods(r, e.t_max, threshold).periods)
            (p.kind == PeriodKind::Bright ? bright : dark).push_back(p.duration);
    return {mean(bright), mean(dark)};
}

}  // namespace

ComparisonStats compare_records(const Ensemble& a, const Ensemble& b, double gap_threshold) {
    if (a.trajectories.empty() || b.trajectories.empty()) throw AnalysisError("compare_records: empty ensemble");
    const double threshold = gap_threshold > 0 ? gap_threshold : default_gap_threshold(a);
    ComparisonStats c;
    c.strong = ks_two_sample(renewal_intervals(a, Channel::Strong), renewal_intervals(b, Channel::Strong));
    c.weak = ks_two_sample(renewal_intervals(a, Channel::Weak), renewal_intervals(b, Channel::Weak));
    const auto [ba, da] = mean_period_durations(a, threshold);
    const auto [bb, db] = mean_period_durations(b, threshold);
    c.bright_mean_ratio = bb > 0 ? ba / bb : 0;
    c.dark_mean_ratio = db > 0 ? da / db : 0;
    return c;
}

Histogram log_histogram(std::span<const double> samples, int bins) {
    Histogram h;
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (double v : samples)
        if (v > 0) lo = std::min(lo, v), hi = std::max(hi, v);
    if (!(hi > 0) || bins < 1) return h;
    if (hi <= lo) hi = lo * 2;
    const double l0 = std::log(lo), l1 = std::log(hi);
    for (int i = 0; i <= bins; ++i) h.edges.push_back(std::exp(l0 + (l1 - l0) * i / bins));
    h.edges.front() = lo;
    h.edges.back() = hi;
    h.counts.assign(bins, 0);
    for (double v : samples) {
        if (!(v > 0)) continue;
        auto k = static_cast<int>((std::log(v) - l0) / (l1 - l0) * bins);
        h.counts[std::clamp(k, 0, bins - 1)]++;
    }
    return h;
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
    out << "bin_left,bin_right,count\n";
    out.precision(17);
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        out << h.edges[i] << ',' << h.edges[i + 1] << ',' << h.counts[i] << '\n';
}

namespace {

nlohmann::ordered_json ks_json(const KsResult& k) {
    return {{"statistic", k.statistic}, {"p_value", k.p_value}, {"n", k.n_a}};
}

nlohmann::ordered_json check(double value, double target, double tolerance, bool& all) {
    const double rel = target != 0 ? std::abs(value - target) / target : 0;
    const bool pass = rel <= tolerance;
    all = all && pass;
    return {{"value", value}, {"target", target}, {"relative_error", rel}, {"tolerance", tolerance}, {"pass", pass}};
}

}  // namespace

std::string analysis_report_json(const Ensemble& ens, const RateTargets& targets, const ReportOptions& opt,
                                 Histogram* histogram, bool* all_passed) {
    bool all = true;
    nlohmann::ordered_json j;
    const double threshold = opt.gap_threshold > 0 ? opt.gap_threshold : default_gap_threshold(ens);
    j["trajectories"] = ens.trajectories.size();
    j["t_max"] = ens.t_max;
    j["emissions"] = {{"strong", 0}, {"weak", 0}};
    std::size_t n_strong = 0, n_weak = 0;
    for (const auto& r : ens.trajectories) n_strong += r.count(Channel::Strong), n_weak += r.count(Channel::Weak);
    j["emissions"] = {{"strong", n_strong}, {"weak", n_weak}};

    std::size_t bright = 0, dark = 0;
    double bright_time = 0, dark_time = 0;
    for (const auto& r : ens.trajectories)
        for (const auto& p : segment_periods(r, ens.t_max, threshold).periods) {
            (p.kind == PeriodKind::Bright ? bright : dark)++;
            (p.kind == PeriodKind::Bright ? bright_time : dark_time) += p.duration;
        }
    j["segmentation"] = {{"gap_threshold", std::isfinite(threshold) ? nlohmann::json(threshold) : nlohmann::json(nullptr)},
                         {"bright_periods", bright},
                         {"dark_periods", dark},
                         {"bright_time", bright_time},
                         {"dark_time", dark_time}};

    nlohmann::ordered_json checks = nlohmann::ordered_json::object();
    const auto strong_waits = waiting_times(ens, Channel::Strong);
    if (histogram) *histogram = log_histogram(strong_waits);
    try {
        const auto fit = fit_waiting_distribution(strong_waits, opt.fit);
        j["strong_fit"] = {{"fast_rate", fit.fast_rate}, {"slow_rate", fit.slow_rate}, {"weight", fit.weight},
                           {"ks_statistic", fit.goodness}, {"t_min", fit.t_min}, {"samples", fit.n_used},
                           {"iterations", fit.iterations}};
        if (targets.fast_rate > 0) checks["fast_rate"] = check(fit.fast_rate, targets.fast_rate, opt.rate_tolerance, all);
        if (targets.slow_rate > 0) checks["slow_rate"] = check(fit.slow_rate, targets.slow_rate, opt.rate_tolerance, all);
    } catch (const AnalysisError& e) {
        j["strong_fit"] = {{"skipped", e.what()}};
    }

    const auto ds = dark_statistics(ens, threshold);
    j["dark_periods"] = {{"count", ds.count}, {"raw_mean", ds.raw_mean}, {"mean_duration", ds.mean_duration},
                         {"exponential_ks", ks_json(ds.exponential_ks)}};
    if (targets.mean_dark > 0 && ds.count >= 20) {
        checks["mean_dark_duration"] = check(ds.mean_duration, targets.mean_dark, opt.rate_tolerance, all);
        const bool pass = ds.exponential_ks.p_value > 0.01;
        all = all && pass;
        checks["dark_exponential"] = {{"p_value", ds.exponential_ks.p_value}, {"pass", pass}};
    }

    const auto weak_waits = waiting_times(ens, Channel::Weak);
    j["weak_waiting_times"] = {{"count", weak_waits.size()}, {"mean", mean(weak_waits)}};

    if (!opt.expected_ordering.empty()) {
        const auto os = emission_ordering(ens, threshold);
        const double frac = opt.expected_ordering == "after" ? os.fraction_after() : os.fraction_before();
        const bool pass = os.dark_periods > 0 && frac >= opt.ordering_fraction;
        all = all && pass;
        checks["emission_ordering"] = {{"expected", "weak " + opt.expected_ordering + " dark"},
                                       {"dark_periods", os.dark_periods},
                                       {"weak_before", os.weak_before},
                                       {"weak_after", os.weak_after},
                                       {"no_weak", os.no_weak},
                                       {"fraction", frac},
                                       {"required", opt.ordering_fraction},
                                       {"pass", pass}};
    }
    j["checks"] = checks;
    j["all_passed"] = all;
    if (all_passed) *all_passed = all;
    return j.dump(2) + "\n";
}

}  // namespace shelving
