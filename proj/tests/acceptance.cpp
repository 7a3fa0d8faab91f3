// Acceptance checks 1-9. Prints one PASS/FAIL line per criterion plus detail
// lines; exit status is the number of failures. Arguments select criteria
// (e.g. `acceptance 3 9`); none runs all of them.

#include "shelving/analysis.hpp"
#include "shelving/dynamics.hpp"
#include "shelving/ensemble.hpp"
#include "shelving/oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <set>
#include <string>

using namespace shelving;

namespace {

// Tolerances, pinned.
constexpr double kNormDrift = 1e-6;
constexpr double kLaunchNorm = 4e-16;
constexpr double kNoOutflow = 1e-12;
constexpr double kFireRate = 0.05, kFireTol = 0.002;
constexpr double kSelectRatio = 200, kSelectTol = 0.05;
constexpr double kRateTol = 0.10;
constexpr double kDarkKsP = 0.01;
constexpr double kOrderFraction = 0.99;
constexpr double kKsPass = 0.01, kKsControl = 1e-3;
constexpr double kLoopNorm = 1e-9;

struct Outcome {
    bool pass = true;
    std::string detail;
};

void note(Outcome& o, const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    o.detail += "    ";
    o.detail += buf;
    o.detail += '\n';
}

void require(Outcome& o, bool ok, const char* what) {
    if (!ok) {
        o.pass = false;
        note(o, "failed: %s", what);
    }
}

// ---------------------------------------------------------------------------

Outcome normalization() {
    Outcome o;
    const auto program = three_level_v_model(desk_scale_scheme());
    TrajectoryStats total;
    double t = 0;
    std::uint64_t traj = 0;
    while (total.steps < 1'000'000) {
        const auto r = run_trajectory(program, 50'000, 1, traj++);
        total.steps += r.stats.steps;
        total.collapses += r.stats.collapses;
        total.max_norm_drift = std::max(total.max_norm_drift, r.stats.max_norm_drift);
        total.max_launch_norm_error = std::max(total.max_launch_norm_error, r.stats.max_launch_norm_error);
        t += 50'000;
    }
    note(o, "V, delayed onset: %llu steps over %.0f time units, %llu collapses",
         static_cast<unsigned long long>(total.steps), t, static_cast<unsigned long long>(total.collapses));
    note(o, "max |s - expected s| = %.3e (bound %.0e)", total.max_norm_drift, kNormDrift);
    note(o, "max |s - 1| right after launch = %.3e (bound %.0e)", total.max_launch_norm_error, kLaunchNorm);
    require(o, total.max_norm_drift < kNormDrift, "norm drift");
    require(o, total.max_launch_norm_error <= kLaunchNorm, "launch norm");
    return o;
}

// ---------------------------------------------------------------------------

std::vector<ModelProgram> all_programs() {
    std::vector<ModelProgram> out;
    for (auto kind : {ConfigurationKind::V, ConfigurationKind::Lambda, ConfigurationKind::CascadeUp,
                      ConfigurationKind::CascadeDown})
        for (auto onset : {RabiOnset::Delayed, RabiOnset::Immediate})
            for (bool stim : {false, true}) {
                auto s = desk_scale_scheme(kind);
                s.rabi_onset = onset;
                s.stimulated_emission = stim;
                out.push_back(build_configuration(s));
            }
    for (auto onset : {RabiOnset::Delayed, RabiOnset::Immediate})
        for (bool stim : {false, true}) {
            auto s = desk_scale_scheme();
            s.rabi_onset = onset;
            s.stimulated_emission = stim;
            out.push_back(two_level_model(s));
        }
    return out;
}

std::vector<SystemState> reachable_states(const ModelProgram& program, int depth) {
    std::vector<SystemState> all{program.initial_state(3, 0)}, frontier = all;
    for (int d = 0; d < depth; ++d) {
        std::vector<SystemState> next;
        for (const auto& st : frontier)
            for (const auto& c : st.components)
                if (c.status == Status::Ready) next.push_back(launch(c, program, 0.0, st.rng));
        all.insert(all.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return all;
}

Outcome no_outflow() {
    Outcome o;
    double worst = 0;
    std::size_t states = 0, comparisons = 0;
    for (const auto& program : all_programs()) {
        for (auto st : reachable_states(program, 3)) {
            ++states;
            for (int i = 0; i < 20; ++i) step(st, 0.05, 1e9);  // non-trivial ready amplitudes
            auto zeroed = st;
            for (auto& c : zeroed.components)
                if (c.status == Status::Ready) c.amplitude = 0;
            const StepPlan plan(st.kernel, 0.07);
            for (bool planned : {false, true}) {
                auto a = st, b = zeroed;
                if (planned) {
                    plan.advance(a, 1e9);
                    plan.advance(b, 1e9);
                } else {
                    step(a, 0.07, 1e9);
                    step(b, 0.07, 1e9);
                }
                for (std::size_t i = 0; i < st.components.size(); ++i) {
                    if (st.components[i].status != Status::Realized) continue;
                    const auto da = a.components[i].amplitude - st.components[i].amplitude;
                    const auto db = b.components[i].amplitude - zeroed.components[i].amplitude;
                    worst = std::max(worst, std::abs(da - db));
                    ++comparisons;
                }
            }
        }
    }
    note(o, "%zu programs, %zu states up to 3 launches deep, %zu realized deltas (stepper and plan)",
         all_programs().size(), states, comparisons);
    note(o, "max |delta(full) - delta(ready zeroed)| = %.3e (bound %.0e)", worst, kNoOutflow);
    require(o, worst <= kNoOutflow, "no-outflow");
    return o;
}

// ---------------------------------------------------------------------------

Outcome trigger_statistics() {
    Outcome o;
    const TrajectoryRng rng(2024, 0);
    const double s = 0.8, dt = 0.01;

    CurrentReport one;
    one.n = 1;
    one.current[0] = kFireRate * s / dt;
    one.total = one.current[0];
    const int n_steps = 100'000;
    int fired = 0;
    for (int i = 0; i < n_steps; ++i) fired += sample_trigger(one, s, dt, rng, i).has_value();
    const double freq = double(fired) / n_steps;
    note(o, "J dt / s = %.3f: fired %d of %d steps, frequency %.5f (target %.3f +- %.3f)", kFireRate, fired, n_steps,
         freq, kFireRate, kFireTol);
    require(o, std::abs(freq - kFireRate) <= kFireTol, "fire frequency");

    // Small per-step probabilities keep double firings (resolved by J
    // weights) from biasing the ratio: the exact value here is 200 * 1.0099.
    CurrentReport two;
    two.n = 2;
    two.component[1] = 1;
    const double p_big = 0.01;
    two.current[0] = p_big * s / dt;
    two.current[1] = two.current[0] / kSelectRatio;
    two.total = two.current[0] + two.current[1];
    const int n_collapses = 1'000'000;
    std::uint64_t index = 1'000'000;
    long counts[2] = {0, 0};
    for (int c = 0; c < n_collapses; ++c) {
        std::optional<std::size_t> k;
        while (!(k = sample_trigger(two, s, dt, TrajectoryRng(2024, 1), index++))) {
        }
        ++counts[*k];
    }
    const double ratio = double(counts[0]) / double(counts[1]);
    note(o, "J ratio 200:1 over %d collapses: selected %ld : %ld, ratio %.1f (target 200 +- 5%%)", n_collapses,
         counts[0], counts[1], ratio);
    require(o, std::abs(ratio / kSelectRatio - 1) <= kSelectTol, "selection ratio");
    return o;
}

// ---------------------------------------------------------------------------

Outcome two_level() {
    Outcome o;
    for (auto onset : {RabiOnset::Delayed, RabiOnset::Immediate})
        for (bool stim : {false, true}) {
            auto s = desk_scale_scheme();
            s.n_strong_photons = 100;
            s.rabi_onset = onset;
            s.stimulated_emission = stim;
            const auto r = run_trajectory(two_level_model(s), 1e6, 7);
            const auto strong = r.record.count(Channel::Strong);
            note(o, "%s onset, stimulated %s: terminated %s at t=%.1f with %zu strong photons (%zu weak)",
                 std::string(to_string(onset)).c_str(), stim ? "on" : "off", r.stats.terminated ? "yes" : "no",
                 r.record.empty() ? 0.0 : r.record.emissions.back().time, strong, r.record.count(Channel::Weak));
            require(o, r.stats.terminated && strong == 100 && r.record.count(Channel::Weak) == 0, "N = 100");
        }
    return o;
}

// ---------------------------------------------------------------------------
// Criteria 5, 6 and 8 share one immediate-onset V ensemble.

struct DeskRun {
    LevelScheme scheme;
    OracleReport oracle;
    Ensemble ensemble;
    double seconds = 0;
};

const DeskRun& desk_run() {
    static const DeskRun run = [] {
        DeskRun r;
        r.scheme = desk_scale_scheme();
        r.scheme.rabi_onset = RabiOnset::Immediate;
        r.oracle = telegraph_report(r.scheme);
        const auto t0 = std::chrono::steady_clock::now();
        r.ensemble = run_ensemble(build_configuration(r.scheme), 1e7, 8, 11).ensemble;
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return r;
    }();
    return run;
}

Outcome waiting_time_fit() {
    Outcome o;
    const auto& run = desk_run();
    const auto w = waiting_times(run.ensemble, Channel::Strong);
    note(o, "immediate-onset V, 8 x 1e7 time units (%.0f s): %zu strong photons, %zu waiting times", run.seconds,
         [&] {
             std::size_t n = 0;
             for (const auto& t : run.ensemble.trajectories) n += t.count(Channel::Strong);
             return n;
         }(),
         w.size());
    const auto fit = fit_waiting_distribution(w);
    const double fast_err = fit.fast_rate / run.oracle.fast_rate - 1;
    const double slow_err = fit.slow_rate / run.oracle.params.lambda2 - 1;
    note(o, "fit (t >= %.2f, %zu samples): fast %.5f vs beta1/2 %.5f (%+.2f%%), slow %.6f vs lambda2 %.6f (%+.2f%%)",
         fit.t_min, fit.n_used, fit.fast_rate, run.oracle.fast_rate, 100 * fast_err, fit.slow_rate,
         run.oracle.params.lambda2, 100 * slow_err);
    note(o, "fit weight %.5f (oracle %.5f), KS distance to fitted density %.4f", fit.weight, run.oracle.params.weight,
         fit.goodness);
    require(o, w.size() >= 10'000, "at least 1e4 events");
    require(o, std::abs(fast_err) <= kRateTol, "fast rate");
    require(o, std::abs(slow_err) <= kRateTol, "slow rate");
    return o;
}

Outcome dark_periods() {
    Outcome o;
    const auto& run = desk_run();
    const double threshold = default_gap_threshold(run.ensemble);
    const auto ds = dark_statistics(run.ensemble, threshold);
    const double target = 1.0 / run.oracle.params.lambda2;
    const double err = ds.mean_duration / target - 1;
    note(o, "gap threshold %.1f: %zu interior dark periods, raw mean %.1f", threshold, ds.count, ds.raw_mean);
    note(o, "mean beyond threshold %.1f vs 1/lambda2 %.1f (%+.2f%%); exponential KS D=%.4f p=%.3f", ds.mean_duration,
         target, 100 * err, ds.exponential_ks.statistic, ds.exponential_ks.p_value);
    require(o, ds.count >= 100, "enough dark periods");
    require(o, ds.exponential_ks.p_value > kDarkKsP, "exponential dark durations");
    require(o, std::abs(err) <= kRateTol, "dark mean");
    return o;
}

// ---------------------------------------------------------------------------

Outcome configuration_ordering() {
    Outcome o;
    struct Case {
        ConfigurationKind kind;
        double omega_weak;
        double t_max;
        std::size_t n;
    };
    // Cascade E1<E0 shelves only from the short-lived level 0; its weak drive
    // is raised so dark periods occur at all. Trajectories stay under 1e7 time
    // units: the desk reservoir of 1e6 strong photons runs out near 1.3e7.
    const Case cases[] = {{ConfigurationKind::V, 0.002, 1e7, 8},
                          {ConfigurationKind::Lambda, 0.002, 2.5e5, 4},
                          {ConfigurationKind::CascadeUp, 0.002, 2.5e5, 4},
                          {ConfigurationKind::CascadeDown, 0.05, 5e5, 4}};
    for (const auto& c : cases) {
        auto s = desk_scale_scheme(c.kind);
        s.omega_weak = c.omega_weak;
        const auto program = build_configuration(s);
        const auto t0 = std::chrono::steady_clock::now();
        const auto ens = run_ensemble(program, c.t_max, c.n, 21).ensemble;
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const auto os = emission_ordering(ens, default_gap_threshold(ens));
        const bool after = program.expected_ordering() == EmissionOrdering::WeakAfterDark;
        const std::size_t right = after ? os.weak_after : os.weak_before;
        const std::size_t with_weak = os.weak_before + os.weak_after;
        const double frac = with_weak ? double(right) / with_weak : 0;
        const double frac_all = os.dark_periods ? double(right) / os.dark_periods : 0;
        note(o, "%-11s delayed, omega_weak %.3f, %zu x %.1e units (%.0f s): %zu darks, before %zu after %zu no-weak %zu",
             std::string(to_string(c.kind)).c_str(), c.omega_weak, c.n, c.t_max, secs, os.dark_periods,
             os.weak_before, os.weak_after, os.no_weak);
        note(o, "%-11s expected weak %s dark: %.4f of darks with a weak photon, %.4f of all darks", "",
             after ? "after" : "before", frac, frac_all);
        require(o, with_weak >= 50 && frac >= kOrderFraction, std::string(to_string(c.kind)).c_str());
    }
    // Information only: the immediate-onset V ensemble shared with criteria 5, 6, 8.
    const auto& run = desk_run();
    const auto os = emission_ordering(run.ensemble, default_gap_threshold(run.ensemble));
    note(o, "(info) V immediate onset, 8 x 1e7 units: %zu darks, before %zu after %zu no-weak %zu, after/all = %.4f",
         os.dark_periods, os.weak_before, os.weak_after, os.no_weak, os.fraction_after());
    return o;
}

// ---------------------------------------------------------------------------

Outcome cross_engine() {
    Outcome o;
    const auto& run = desk_run();
    const auto t0 = std::chrono::steady_clock::now();
    const auto mcwf = mcwf_ensemble(run.scheme, run.ensemble.t_max, run.ensemble.trajectories.size(), 12);
    auto wrong = run.scheme;
    wrong.omega_strong *= 1.2;
    wrong.omega_weak *= 1.5;
    const auto control = mcwf_ensemble(wrong, run.ensemble.t_max, run.ensemble.trajectories.size(), 13);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto same = compare_records(run.ensemble, mcwf);
    const auto diff = compare_records(run.ensemble, control);
    note(o, "nRules ensemble vs quantum-jump baseline, same scheme, independent seeds (baseline %.0f s)", secs);
    note(o, "strong renewal KS D=%.5f p=%.3f (n=%zu/%zu); weak D=%.4f p=%.3f (n=%zu/%zu)", same.strong.statistic,
         same.strong.p_value, same.strong.n_a, same.strong.n_b, same.weak.statistic, same.weak.p_value, same.weak.n_a,
         same.weak.n_b);
    note(o, "control (omega_strong x1.2, omega_weak x1.5): strong p=%.2e, weak p=%.2e", diff.strong.p_value,
         diff.weak.p_value);
    require(o, same.strong.p_value > kKsPass && same.weak.p_value > kKsPass, "same-scheme KS");
    require(o, diff.strong.p_value < kKsControl && diff.weak.p_value < kKsControl, "negative control");
    return o;
}

// ---------------------------------------------------------------------------

Outcome radiationless_loop() {
    Outcome o;
    const auto scheme = desk_scale_scheme();
    const auto program = three_level_v_model(scheme, {.spontaneous_decay = false});
    const auto init = program.initial_state(5, 0);
    const Component* weak = nullptr;
    for (const auto& c : init.components)
        if (c.status == Status::Ready && c.gap->channel == Channel::Weak) weak = &c;
    if (!weak) {
        require(o, false, "no weak absorption component at the fork");
        return o;
    }
    auto st = launch(*weak, program, 0.0, init.rng);
    const double h = 0.5 * std::hypot(scheme.omega_strong, scheme.omega_weak);
    const double period = 2 * std::numbers::pi / h;
    const int per_period = 2000;
    const StepPlan plan(st.kernel, period / per_period);
    double worst = 0, max_a1 = 0;
    int fired = 0;
    for (int i = 0; i < 100 * per_period; ++i) {
        const auto out = plan.advance(st, 0.1);
        fired += out.report.n;  // no ready slot means nothing can fire
        worst = std::max(worst, std::abs(st.recompute_s() - 1));
        for (const auto& c : st.components)
            if (c.label.level == Level::A1) max_a1 = std::max(max_a1, c.square_modulus());
    }
    note(o, "V launched into a2, spontaneous channels off: %d realized, %d ready components", st.kernel.n_realized,
         st.kernel.n_ready);
    note(o, "100 loop periods of %.2f at %d steps each: max |s - 1| = %.3e (bound %.0e), peak |a1|^2 = %.3e",
         period, per_period, worst, kLoopNorm, max_a1);
    const auto r = run_trajectory(program, 100 * period, 5, 0, {.steps_per_rabi_period = per_period});
    note(o, "full engine from the fork: %zu emissions, max drift %.3e", r.record.size(), r.stats.max_norm_drift);
    require(o, worst <= kLoopNorm, "modulus");
    require(o, fired == 0 && st.kernel.n_ready == 0 && r.record.empty(), "zero emissions");
    // a2 sits far off resonance from the dressed a0/a1 pair, so a1 only
    // reaches ~(omega_weak / omega_strong)^2; it must be fed at all
    require(o, max_a1 > 1e-6, "loop reaches a1");
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"normalization and launch norm", normalization},
        {"no outflow from ready components", no_outflow},
        {"trigger statistics", trigger_statistics},
        {"two-level bookkeeping, N = 100", two_level},
        {"strong waiting-time mixture vs oracle", waiting_time_fit},
        {"dark-period statistics", dark_periods},
        {"weak-photon ordering per configuration", configuration_ordering},
        {"cross-engine equivalence", cross_engine},
        {"radiationless resonance loop", radiationless_loop},
    };
    std::set<int> chosen;
    for (int i = 1; i < argc; ++i) chosen.insert(std::atoi(argv[i]));
    int failures = 0;
    for (int i = 0; i < 9; ++i) {
        if (!chosen.empty() && !chosen.count(i + 1)) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            note(o, "exception: %s", e.what());
        }
        std::printf("C%d %s %s\n%s", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures;
}
