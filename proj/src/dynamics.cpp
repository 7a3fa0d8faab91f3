#include "shelving/dynamics.hpp"

#include "shelving/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace shelving {

namespace {

using Slots = std::array<Amplitude, kMaxComponents>;

inline Amplitude minus_i(double h, Amplitude z) { return {h * z.imag(), -h * z.real()}; }

// 2 Im(g conj(q)) for the gathered laser drive g = sum h c_src.
inline double laser_current(Amplitude g, Amplitude q) { return 2.0 * (g.imag() * q.real() - g.real() * q.imag()); }

struct Stage {
    Slots k{};                                  // d(realized)/dt
    std::array<Amplitude, kMaxComponents> g{};  // laser drive per ready slot
    std::array<double, kMaxComponents> sink{};  // sink inflow per ready slot
};

inline void evaluate(const StepKernel& kn, const Slots& y, Stage& st) {
    for (int i = 0; i < kn.n_realized; ++i) st.k[i] = -kn.half_damping[i] * y[i];
    for (int c = 0; c < kn.n_couplings; ++c) {
        const auto& cp = kn.couplings[c];
        st.k[cp.target] += minus_i(cp.h, y[cp.source]);
    }
    for (int r = 0; r < kn.n_ready; ++r) {
        st.g[r] = 0;
        st.sink[r] = 0;
    }
    for (int f = 0; f < kn.n_inflows; ++f) {
        const auto& in = kn.inflows[f];
        if (in.spontaneous) st.sink[in.ready] += in.coupling * std::norm(y[in.source]);
        else st.g[in.ready] += in.coupling * y[in.source];
    }
}

}  // namespace

void compile_kernel(SystemState& state) {
    if (!state.scope.is_truncated()) throw StateError("compile_kernel: scope has edges out of ready components");
    if (state.components.size() > static_cast<std::size_t>(kMaxComponents))
        throw StateError("compile_kernel: too many components");

    StepKernel kn;
    std::array<int, kMaxComponents> slot{};
    for (std::size_t i = 0; i < state.components.size(); ++i) {
        const auto& c = state.components[i];
        if (c.status == Status::Realized) {
            slot[i] = kn.n_realized;
            kn.realized[kn.n_realized++] = static_cast<std::uint8_t>(i);
        } else {
            slot[i] = kn.n_ready;
            kn.ready_is_sink[kn.n_ready] = c.gap && c.gap->kind == EdgeKind::SpontaneousEmission;
            kn.ready[kn.n_ready++] = static_cast<std::uint8_t>(i);
        }
    }

    double rabi_sq = 0;
    for (const auto& e : state.scope.edges) {
        const auto src = state.find(e.source);
        const auto dst = state.find(e.target);
        if (!src || !dst) throw StateError("compile_kernel: edge references a missing component");
        const auto& target = state.components[*dst];
        if (target.status == Status::Realized) {
            if (e.kind == EdgeKind::SpontaneousEmission) throw StateError("spontaneous edge into a realized component");
            kn.couplings[kn.n_couplings++] = {static_cast<std::uint8_t>(slot[*dst]),
                                              static_cast<std::uint8_t>(slot[*src]), e.coupling};
            rabi_sq += 2.0 * e.coupling * e.coupling;  // each pair appears twice: (2h)^2 / 2 per direction
            continue;
        }
        const bool spontaneous = e.kind == EdgeKind::SpontaneousEmission;
        if (spontaneous != kn.ready_is_sink[slot[*dst]])
            throw StateError("ready component fed by mixed edge kinds");
        kn.inflows[kn.n_inflows++] = {static_cast<std::uint8_t>(slot[*dst]), static_cast<std::uint8_t>(slot[*src]),
                                      e.coupling, spontaneous};
        if (spontaneous) {
            kn.half_damping[slot[*src]] += 0.5 * e.coupling;
            kn.max_sink_rate = std::max(kn.max_sink_rate, e.coupling);
        } else {
            kn.laser_inflow_sq += e.coupling * e.coupling;
        }
    }
    kn.rabi_frequency = std::sqrt(rabi_sq);
    for (int i = 0; i < kn.n_realized; ++i) kn.max_damping = std::max(kn.max_damping, 2.0 * kn.half_damping[i]);
    state.kernel = kn;
}

CurrentReport compute_currents(const SystemState& state) {
    const auto& kn = state.kernel;
    Slots y{};
    for (int i = 0; i < kn.n_realized; ++i) y[i] = state.components[kn.realized[i]].amplitude;
    Stage st;
    evaluate(kn, y, st);
    CurrentReport rep;
    rep.n = kn.n_ready;
    rep.timestamp = state.time;
    for (int r = 0; r < kn.n_ready; ++r) {
        rep.component[r] = kn.ready[r];
        const double j = kn.ready_is_sink[r] ? st.sink[r]
                                             : laser_current(st.g[r], state.components[kn.ready[r]].amplitude);
        rep.current[r] = std::max(0.0, j);
        rep.total += rep.current[r];
    }
    return rep;
}

StepOutcome step(SystemState& state, double dt, double trigger_cap) {
    if (!(dt > 0)) throw StateError("step: dt must be positive");
    const auto& kn = state.kernel;
    const int nr = kn.n_realized, nq = kn.n_ready;

    Slots r0{}, q0{};
    std::array<double, kMaxComponents> m0{};
    double live = 0;
    for (int i = 0; i < nr; ++i) {
        r0[i] = state.components[kn.realized[i]].amplitude;
        live += std::norm(r0[i]);
    }
    for (int j = 0; j < nq; ++j) {
        q0[j] = state.components[kn.ready[j]].amplitude;
        m0[j] = std::norm(q0[j]);
    }

    // Classic RK4 on the realized block; ready laser amplitudes ride along
    // with the same stage values, sinks integrate gamma |c|^2 with the same weights.
    constexpr double kNode[4] = {0.0, 0.5, 0.5, 1.0};
    constexpr double kWeight[4] = {1.0 / 6, 2.0 / 6, 2.0 / 6, 1.0 / 6};
    Slots y = r0, rsum{}, qsum{};
    Slots q = q0;
    std::array<double, kMaxComponents> jbar{}, jstart{};
    Stage st;
    for (int s = 0; s < 4; ++s) {
        if (s > 0) {
            for (int i = 0; i < nr; ++i) y[i] = r0[i] + (kNode[s] * dt) * st.k[i];
            for (int j = 0; j < nq; ++j) q[j] = q0[j] + minus_i(kNode[s] * dt, st.g[j]);
        }
        evaluate(kn, y, st);
        for (int i = 0; i < nr; ++i) rsum[i] += kWeight[s] * st.k[i];
        for (int j = 0; j < nq; ++j) {
            const double jj = kn.ready_is_sink[j] ? st.sink[j] : laser_current(st.g[j], q[j]);
            if (s == 0) jstart[j] = jj;
            jbar[j] += kWeight[s] * jj;
            qsum[j] += kWeight[s] * st.g[j];
        }
    }

    StepOutcome out;
    out.live_modulus = live;
    out.report.n = nq;
    out.report.timestamp = state.time + 0.5 * dt;
    for (int j = 0; j < nq; ++j) {
        const double jc = std::max(0.0, jbar[j]);
        if (jc * dt > trigger_cap * live) {
            out.rejected = true;
            return out;
        }
        out.report.component[j] = kn.ready[j];
        out.report.current[j] = jc;
        out.report.total += jc;
        out.start_current[j] = std::max(0.0, jstart[j]);
    }

    double s = 0;
    for (int i = 0; i < nr; ++i) {
        auto& a = state.components[kn.realized[i]].amplitude;
        a = r0[i] + dt * rsum[i];
        y[i] = a;
        s += std::norm(a);
    }
    for (int j = 0; j < nq; ++j) {
        auto& a = state.components[kn.ready[j]].amplitude;
        if (kn.ready_is_sink[j]) {
            const double m = m0[j] + dt * jbar[j];
            a = std::sqrt(std::max(0.0, m));
            s += m;
        } else {
            a = q0[j] + minus_i(dt, qsum[j]);
            s += std::norm(a);
            state.expected_s += jbar[j] * dt;
        }
    }
    evaluate(kn, y, st);
    for (int j = 0; j < nq; ++j) {
        const double jj = kn.ready_is_sink[j]
                              ? st.sink[j]
                              : laser_current(st.g[j], state.components[kn.ready[j]].amplitude);
        out.end_current[j] = std::max(0.0, jj);
    }
    state.s = s;
    state.time += dt;
    return out;
}

namespace {

// Instantaneous currents from the realized values y and ready amplitudes q.
void instant_currents(const StepKernel& kn, const Slots& y, const Slots& q, std::array<double, kMaxComponents>& j) {
    Slots g;
    for (int r = 0; r < kn.n_ready; ++r) {
        j[r] = 0;
        g[r] = 0;
    }
    for (int f = 0; f < kn.n_inflows; ++f) {
        const auto& in = kn.inflows[f];
        if (in.spontaneous) j[in.ready] += in.coupling * std::norm(y[in.source]);
        else g[in.ready] += in.coupling * y[in.source];
    }
    for (int r = 0; r < kn.n_ready; ++r)
        j[r] = std::max(0.0, kn.ready_is_sink[r] ? j[r] : laser_current(g[r], q[r]));
}

}  // namespace

StepPlan::StepPlan(const StepKernel& kn, double dt) { rebuild(kn, dt); }

void StepPlan::rebuild(const StepKernel& kn, double dt) {
    if (!(dt > 0)) throw StateError("StepPlan: dt must be positive");
    dt_ = dt;
    kernel_ = kn;
    nr_ = kn.n_realized;
    nq_ = kn.n_ready;
    propagator_ = {};
    for (int r = 0; r < nq_; ++r) {
        current_form_[r] = {};
        drive_sum_[r] = {};
    }
    const int n = nr_;
    Mat a{};
    for (int i = 0; i < n; ++i) a[i][i] = -kn.half_damping[i];
    for (int c = 0; c < kn.n_couplings; ++c) {
        const auto& cp = kn.couplings[c];
        a[cp.target][cp.source] += Amplitude{0, -cp.h};
    }
    std::array<Row, kMaxComponents> drive{};  // laser slot -> row over realized
    for (int f = 0; f < kn.n_inflows; ++f) {
        const auto& in = kn.inflows[f];
        if (!in.spontaneous) drive[in.ready][in.source] += in.coupling;
    }

    auto mul = [n](const Mat& x, const Mat& y) {
        Mat z{};
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                for (int j = 0; j < n; ++j) z[i][j] += x[i][k] * y[k][j];
        return z;
    };
    auto row_times = [n](const Row& r, const Mat& m) {
        Row z{};
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) z[j] += r[k] * m[k][j];
        return z;
    };

    constexpr double kNode[4] = {0.0, 0.5, 0.5, 1.0};
    constexpr double kWeight[4] = {1.0 / 6, 2.0 / 6, 2.0 / 6, 1.0 / 6};
    std::array<Mat, 4> stage{};
    for (int i = 0; i < n; ++i) stage[0][i][i] = 1;
    for (int s = 1; s < 4; ++s) {
        stage[s] = mul(a, stage[s - 1]);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) stage[s][i][j] = (kNode[s] * dt) * stage[s][i][j] + (i == j ? 1.0 : 0.0);
    }

    Mat sum{};
    for (int s = 0; s < 4; ++s) {
        const auto as = mul(a, stage[s]);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) sum[i][j] += kWeight[s] * as[i][j];
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) propagator_[i][j] = dt * sum[i][j] + (i == j ? 1.0 : 0.0);

    for (int r = 0; r < nq_; ++r) {
        auto& form = current_form_[r];
        if (kn.ready_is_sink[r]) {
            for (int f = 0; f < kn.n_inflows; ++f) {
                const auto& in = kn.inflows[f];
                if (in.ready != r) continue;
                for (int s = 0; s < 4; ++s) {
                    const auto& row = stage[s][in.source];
                    for (int l = 0; l < n; ++l)
                        for (int k = 0; k < n; ++k)
                            form[l][k] += kWeight[s] * in.coupling * std::conj(row[l]) * row[k];
                }
            }
            continue;
        }
        // Stage s sees drive u_s y against q0 + d_s y with d_s = -i node_s dt u_{s-1}.
        Row prev{};
        for (int s = 0; s < 4; ++s) {
            const auto u = row_times(drive[r], stage[s]);
            for (int k = 0; k < n; ++k) drive_sum_[r][k] += kWeight[s] * u[k];
            if (s > 0) {
                Row d;
                for (int k = 0; k < n; ++k) d[k] = minus_i(kNode[s] * dt, prev[k]);
                // 2 Im((u y) conj(d y)) = y^H [-i (M - M^H)] y with M_lk = conj(d_l) u_k
                for (int l = 0; l < n; ++l)
                    for (int k = 0; k < n; ++k) {
                        const Amplitude m = std::conj(d[l]) * u[k];
                        const Amplitude mh = std::conj(std::conj(d[k]) * u[l]);
                        form[l][k] += kWeight[s] * Amplitude{0, -1} * (m - mh);
                    }
            }
            prev = u;
        }
    }
}

bool StepPlan::matches(const StepKernel& kn, double dt) const {
    const auto& a = kernel_;
    if (dt != dt_ || a.n_realized != kn.n_realized || a.n_ready != kn.n_ready || a.n_couplings != kn.n_couplings ||
        a.n_inflows != kn.n_inflows)
        return false;
    for (int i = 0; i < kn.n_realized; ++i)
        if (a.half_damping[i] != kn.half_damping[i]) return false;
    for (int r = 0; r < kn.n_ready; ++r)
        if (a.ready_is_sink[r] != kn.ready_is_sink[r]) return false;
    for (int c = 0; c < kn.n_couplings; ++c) {
        const auto &x = a.couplings[c], &y = kn.couplings[c];
        if (x.target != y.target || x.source != y.source || x.h != y.h) return false;
    }
    for (int f = 0; f < kn.n_inflows; ++f) {
        const auto &x = a.inflows[f], &y = kn.inflows[f];
        if (x.ready != y.ready || x.source != y.source || x.coupling != y.coupling || x.spontaneous != y.spontaneous)
            return false;
    }
    return true;
}

template <int N>
StepOutcome StepPlan::advance_fixed(SystemState& state, double trigger_cap) const {
    const auto& kn = state.kernel;
    constexpr int n = N;

    Slots y, q;
    double live = 0;
    for (int i = 0; i < n; ++i) {
        y[i] = state.components[kn.realized[i]].amplitude;
        live += std::norm(y[i]);
    }
    for (int r = 0; r < nq_; ++r) q[r] = state.components[kn.ready[r]].amplitude;

    StepOutcome out;
    out.live_modulus = live;
    out.report.n = nq_;
    out.report.timestamp = state.time + 0.5 * dt_;
    std::array<double, kMaxComponents> jbar;
    for (int r = 0; r < nq_; ++r) {
        const auto& form = current_form_[r];
        double quad = 0;
        for (int l = 0; l < n; ++l) {
            Amplitude fy = 0;
            for (int k = 0; k < n; ++k) fy += form[l][k] * y[k];
            quad += y[l].real() * fy.real() + y[l].imag() * fy.imag();
        }
        if (!kn.ready_is_sink[r]) {
            Amplitude g = 0;
            for (int k = 0; k < n; ++k) g += drive_sum_[r][k] * y[k];
            quad += laser_current(g, q[r]);
        }
        jbar[r] = quad;
        const double jc = std::max(0.0, quad);
        if (jc * dt_ > trigger_cap * live) {
            out.rejected = true;
            return out;
        }
        out.report.component[r] = kn.ready[r];
        out.report.current[r] = jc;
        out.report.total += jc;
    }
    instant_currents(kn, y, q, out.start_current);

    Slots yn;
    double s = 0;
    for (int i = 0; i < n; ++i) {
        Amplitude v = 0;
        for (int k = 0; k < n; ++k) v += propagator_[i][k] * y[k];
        yn[i] = v;
        state.components[kn.realized[i]].amplitude = v;
        s += std::norm(v);
    }
    for (int r = 0; r < nq_; ++r) {
        auto& a = state.components[kn.ready[r]].amplitude;
        if (kn.ready_is_sink[r]) {
            const double m = std::norm(q[r]) + dt_ * jbar[r];
            a = std::sqrt(std::max(0.0, m));
            s += m;
        } else {
            Amplitude g = 0;
            for (int k = 0; k < n; ++k) g += drive_sum_[r][k] * y[k];
            a = q[r] + minus_i(dt_, g);
            q[r] = a;
            s += std::norm(a);
            state.expected_s += jbar[r] * dt_;
        }
    }
    for (int r = 0; r < nq_; ++r)
        if (kn.ready_is_sink[r]) q[r] = state.components[kn.ready[r]].amplitude;
    instant_currents(kn, yn, q, out.end_current);
    state.s = s;
    state.time += dt_;
    return out;
}

StepOutcome StepPlan::advance(SystemState& state, double trigger_cap) const {
    const auto& kn = state.kernel;
    if (kn.n_realized != nr_ || kn.n_ready != nq_) throw StateError("StepPlan: kernel does not match the plan");
    switch (nr_) {
        case 1: return advance_fixed<1>(state, trigger_cap);
        case 2: return advance_fixed<2>(state, trigger_cap);
        case 3: return advance_fixed<3>(state, trigger_cap);
        case 4: return advance_fixed<4>(state, trigger_cap);
        case 5: return advance_fixed<5>(state, trigger_cap);
        case 6: return advance_fixed<6>(state, trigger_cap);
        case 7: return advance_fixed<7>(state, trigger_cap);
        case 8: return advance_fixed<8>(state, trigger_cap);
        default: throw StateError("StepPlan: no realized component");
    }
}

std::optional<std::size_t> sample_trigger(const CurrentReport& report, double s, double dt,
                                          const TrajectoryRng& rng, std::uint64_t index) {
    if (!(s > 0) || !(dt > 0)) throw StateError("sample_trigger: s and dt must be positive");
    std::array<bool, kMaxComponents> fired{};
    int n_fired = 0;
    double fired_weight = 0;
    TrajectoryRng::Pair u{};
    for (int k = 0; k < report.n; ++k) {
        const double p = report.current[k] * dt / s;
        if (p < 0 || p > 0.1 + 1e-12) throw StateError("sample_trigger: probability outside [0, 0.1]");
        if (k % 2 == 0) u = rng.draw(index, static_cast<std::uint32_t>(k / 2));
        const double uk = k % 2 == 0 ? u.first : u.second;
        if (uk < p) {
            fired[k] = true;
            ++n_fired;
            fired_weight += report.current[k];
        }
    }
    if (n_fired == 0) return std::nullopt;
    int pick = 0;
    if (n_fired == 1) {
        while (!fired[pick]) ++pick;
    } else {
        double target = rng.draw(index, 8).first * fired_weight;
        for (pick = 0; pick < report.n; ++pick) {
            if (!fired[pick]) continue;
            target -= report.current[pick];
            if (target <= 0) break;
        }
        if (pick == report.n)
            for (pick = report.n - 1; !fired[pick]; --pick) {}
    }
    return report.component[pick];
}

SystemState collapse(const SystemState& state, std::size_t chosen) {
    if (chosen >= state.components.size()) throw StateError("collapse: no such component");
    const auto& c = state.components[chosen];
    if (c.status != Status::Ready) throw StateError("collapse: chosen component is not ready");
    SystemState out;
    out.time = state.time;
    out.rng = state.rng;
    out.draw_index = state.draw_index;
    out.components = {Component{c.label, c.amplitude, Status::Realized, std::nullopt}};
    out.scope.realized = {c.label};
    out.s = out.recompute_s();
    out.expected_s = out.s;
    compile_kernel(out);
    return out;
}

double resolution_step(const StepKernel& kn, const LevelScheme& scheme, const EngineOptions& opt) {
    double dt = opt.max_step > 0 ? opt.max_step : 10.0 / scheme.gamma_strong;
    if (kn.rabi_frequency > 0)
        dt = std::min(dt, 2.0 * std::numbers::pi / (kn.rabi_frequency * std::max(50.0, opt.steps_per_rabi_period)));
    if (kn.max_damping > 0) dt = std::min(dt, opt.damping_step_fraction / kn.max_damping);
    return dt;
}

double launch_step(const StepKernel& kn, const LevelScheme& scheme, const EngineOptions& opt) {
    double dt = resolution_step(kn, scheme, opt);
    // A held source drives |c|^2 = h^2 t^2 into a truncated ready component.
    if (kn.laser_inflow_sq > 0) dt = std::min(dt, std::sqrt(0.5 * opt.trigger_cap / kn.laser_inflow_sq));
    if (kn.max_sink_rate > 0) dt = std::min(dt, 0.5 * opt.trigger_cap / kn.max_sink_rate);
    return dt;
}

namespace {

// Fraction of the step at which a firing happens, for a current varying
// linearly from a to b across the step.
double place_in_step(double a, double b, double u) {
    const double d = b - a;
    if (std::abs(d) <= 1e-9 * (a + b) || a + b <= 0) return u;
    const double disc = a * a + d * u * (a + b);
    return std::clamp((std::sqrt(std::max(0.0, disc)) - a) / d, 0.0, 1.0);
}

// Largest dt_res / 2^k not above dt, so step plans repeat.
double snap_step(double dt, double dt_res) {
    if (dt >= dt_res) return dt_res;
    double h = dt_res;
    while (h > dt) h *= 0.5;
    return h;
}

}  // namespace

TrajectoryResult run_trajectory(const ModelProgram& program, double t_max, std::uint64_t seed,
                                std::uint64_t trajectory_id, const EngineOptions& opt) {
    TrajectoryResult result;
    auto& stats = result.stats;
    if (!(t_max > 0)) return result;

    const auto& scheme = program.scheme();
    SystemState state = program.initial_state(seed, trajectory_id);
    double dt_res = resolution_step(state.kernel, scheme, opt);
    double dt = snap_step(launch_step(state.kernel, scheme, opt), dt_res);
    // Launches keep reproducing the same few kernels and the same dt ramp.
    std::vector<StepPlan> plans(12);
    std::size_t next_plan = 0;
    const StepPlan* plan = nullptr;

    while (state.time < t_max) {
        if (state.kernel.n_ready == 0) {
            stats.terminated = true;
            break;
        }
        const double t0 = state.time;
        const double h = std::min(dt, t_max - t0);
        if (!plan || !plan->matches(state.kernel, h)) {
            plan = nullptr;
            for (const auto& p : plans)
                if (p.matches(state.kernel, h)) plan = &p;
            if (!plan) {
                plans[next_plan].rebuild(state.kernel, h);
                plan = &plans[next_plan];
                next_plan = (next_plan + 1) % plans.size();
            }
        }
        const auto out = plan->advance(state, opt.trigger_cap);
        if (out.rejected) {
            ++stats.rejected_steps;
            dt = 0.5 * h;
            if (dt < 1e-13 * std::max(1.0, t0)) throw NumericError("step size underflow at t=" + std::to_string(t0));
            continue;
        }
        ++stats.steps;
        stats.max_norm_drift = std::max(stats.max_norm_drift, std::abs(state.s - state.expected_s));

        const auto index = state.draw_index++;
        const auto fired = sample_trigger(out.report, out.live_modulus, h, state.rng, index);
        if (!fired) {
            double next = std::min(dt_res, 2.0 * h);
            double live_end = 0;
            for (int i = 0; i < state.kernel.n_realized; ++i)
                live_end += state.components[state.kernel.realized[i]].square_modulus();
            for (int k = 0; k < out.report.n; ++k)
                if (out.end_current[k] > 0)
                    next = std::min(next, 0.5 * opt.trigger_cap * live_end / out.end_current[k]);
            dt = snap_step(next, dt_res);
            continue;
        }

        int slot = 0;
        while (out.report.component[slot] != *fired) ++slot;
        const double theta =
            place_in_step(out.start_current[slot], out.end_current[slot], state.rng.draw(index, 8).second);
        const double t_fire = t0 + theta * h;
        const Component chosen = state.components[*fired];
        if (chosen.gap && chosen.gap->kind == EdgeKind::SpontaneousEmission)
            result.record.emissions.push_back({t_fire, chosen.gap->channel});
        state = launch(chosen, program, t_fire, state.rng, state.draw_index);
        ++stats.collapses;
        stats.max_launch_norm_error = std::max(stats.max_launch_norm_error, std::abs(state.s - 1.0));
        dt_res = resolution_step(state.kernel, scheme, opt);
        dt = snap_step(launch_step(state.kernel, scheme, opt), dt_res);
    }
    stats.photons_absorbed = state.components.front().label.absorbed();
    return result;
}

EmissionRecord run_trajectory(const LevelScheme& scheme, double t_max, std::uint64_t seed) {
    return run_trajectory(build_configuration(scheme), t_max, seed).record;
}

}  // namespace shelving
