#pragma once

#include "shelving/atom_models.hpp"
#include "shelving/component_graph.hpp"
#include "shelving/emission_record.hpp"

#include <array>
#include <optional>
#include <span>

namespace shelving {

/// Probability currents into the ready components, one slot per ready
/// component in kernel order.
struct CurrentReport {
    int n = 0;
    std::array<std::uint8_t, kMaxComponents> component{};  // index into SystemState::components
    std::array<double, kMaxComponents> current{};          // J_k, clamped at zero
    double total = 0;
    double timestamp = 0;

    std::span<const double> currents() const { return {current.data(), static_cast<std::size_t>(n)}; }
};

struct EngineOptions {
    double max_step = 0;  // 0 means 10 / gamma_strong
    double steps_per_rabi_period = 100;
    double damping_step_fraction = 0.25;  // dt <= fraction / largest realized decay rate
    double trigger_cap = 0.1;
};

struct StepOutcome {
    bool rejected = false;
    /// Currents averaged over the step with the integrator's stage weights,
    /// stamped at the step midpoint.
    CurrentReport report;
    std::array<double, kMaxComponents> start_current{};
    std::array<double, kMaxComponents> end_current{};
    /// Modulus still held by realized components at the start of the step;
    /// the trigger normalizer.
    double live_modulus = 0;
};

/// Instantaneous currents: J_k = 2 Im(h c_src conj(c_k)) for laser edges and
/// gamma |c_src|^2 for spontaneous sinks.
CurrentReport compute_currents(const SystemState& state);

/// One RK4 step under the truncated scope, in place. If any J_k dt / live
/// modulus exceeds `trigger_cap` the state is left untouched and
/// `rejected` is set; halve dt and retry.
StepOutcome step(SystemState& state, double dt, double trigger_cap = 0.1);

/// The same RK4 step for a fixed kernel and dt, with the four stages folded
/// into matrices: a propagator for the realized block, an inflow row per
/// ready laser slot and a quadratic form per ready slot for the
/// stage-weighted current. Agrees with step() to rounding; the run loop
/// uses it because dt is constant over long stretches.
class StepPlan {
public:
    StepPlan() = default;
    StepPlan(const StepKernel& kernel, double dt);

    void rebuild(const StepKernel& kernel, double dt);
    double dt() const { return dt_; }
    /// True when built for this dt and a kernel with the same couplings,
    /// damping and ready slots (component indices may differ).
    bool matches(const StepKernel& kernel, double dt) const;
    StepOutcome advance(SystemState& state, double trigger_cap = 0.1) const;

private:
    template <int N>
    StepOutcome advance_fixed(SystemState& state, double trigger_cap) const;

    using Row = std::array<Amplitude, kMaxComponents>;
    using Mat = std::array<Row, kMaxComponents>;

    double dt_ = 0;
    int nr_ = 0, nq_ = 0;
    StepKernel kernel_{};
    Mat propagator_{};
    std::array<Mat, kMaxComponents> current_form_{};  // Hermitian, per ready slot
    std::array<Row, kMaxComponents> drive_sum_{};     // laser slots: sum_s w_s g_s = row . y
};

/// nRule 2 trigger. Each ready slot fires with probability J_k dt / s, s being
/// the live realized modulus (StepOutcome::live_modulus); among
/// several firings one is chosen with weights J_k. Uses the two uniforms of
/// substream (index, 0..) and, on a multiple firing, substream (index, 8).
std::optional<std::size_t> sample_trigger(const CurrentReport& report, double s, double dt,
                                          const TrajectoryRng& rng, std::uint64_t index);

/// nRule 3: keeps only `chosen`, realized, with its amplitude; everything else
/// is zeroed and discarded. Follow with launch().
SystemState collapse(const SystemState& state, std::size_t chosen);

/// Step-size limits for the current kernel.
double resolution_step(const StepKernel& kernel, const LevelScheme& scheme, const EngineOptions& options);
double launch_step(const StepKernel& kernel, const LevelScheme& scheme, const EngineOptions& options);

struct TrajectoryStats {
    std::uint64_t steps = 0;
    std::uint64_t rejected_steps = 0;
    std::uint64_t collapses = 0;
    double max_norm_drift = 0;          // max |s - expected_s|
    double max_launch_norm_error = 0;   // max |s - 1| right after a launch
    bool terminated = false;            // no ready component left before t_max
    std::int64_t photons_absorbed = 0;  // label counts at the end of the run
};

struct TrajectoryResult {
    EmissionRecord record;
    TrajectoryStats stats;
};

TrajectoryResult run_trajectory(const ModelProgram& program, double t_max, std::uint64_t seed,
                                std::uint64_t trajectory_id = 0, const EngineOptions& options = {});

/// Convenience overload: build_configuration(scheme), trajectory 0.
EmissionRecord run_trajectory(const LevelScheme& scheme, double t_max, std::uint64_t seed);

}  // namespace shelving
