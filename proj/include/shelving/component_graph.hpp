#pragma once

#include "shelving/emission_record.hpp"
#include "shelving/level_scheme.hpp"
#include "shelving/rng.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shelving {

using Amplitude = std::complex<double>;

enum class Level : std::uint8_t { A0, A1, A2 };
std::string_view to_string(Level level);

/// Atom level plus laser-photon and emitted-photon bookkeeping. The full
/// ordered list of emission tags lives in the EmissionRecord; the label keeps
/// per-channel counts and the most recent tag, which is enough to tell labels
/// apart and to detect a grown emission record.
struct BasisLabel {
    Level level = Level::A0;
    std::int64_t strong_absorbed = 0;
    std::int64_t weak_absorbed = 0;
    std::int64_t strong_emitted = 0;
    std::int64_t weak_emitted = 0;
    std::optional<Channel> last_emitted;

    std::int64_t emitted() const { return strong_emitted + weak_emitted; }
    std::int64_t absorbed() const { return strong_absorbed + weak_absorbed; }
    bool operator==(const BasisLabel&) const = default;
};

std::string format_label(const BasisLabel& label);

enum class Status : std::uint8_t { Ready, Realized };
std::string_view to_string(Status status);

enum class EdgeKind : std::uint8_t { LaserAbsorption, StimulatedEmission, SpontaneousEmission };
std::string_view to_string(EdgeKind kind);
EdgeKind parse_edge_kind(std::string_view text);

/// Directed coupling: `target` receives amplitude from `source`. Laser edges
/// carry half the Rabi frequency; spontaneous edges carry the decay rate.
struct Edge {
    BasisLabel source;
    BasisLabel target;
    EdgeKind kind = EdgeKind::LaserAbsorption;
    Channel channel = Channel::Strong;
    double coupling = 0;
    bool operator==(const Edge&) const = default;
};

/// The irreversible gap a ready component sits behind.
struct Gap {
    int id = 0;
    EdgeKind kind = EdgeKind::SpontaneousEmission;
    Channel channel = Channel::Strong;
    bool operator==(const Gap&) const = default;
};

struct Component {
    BasisLabel label;
    Amplitude amplitude{};
    Status status = Status::Realized;
    std::optional<Gap> gap;  // present iff ready

    double square_modulus() const { return std::norm(amplitude); }
    bool operator==(const Component&) const = default;
};

struct HamiltonianScope {
    std::vector<BasisLabel> realized;
    std::vector<BasisLabel> ready;
    std::vector<Edge> edges;

    bool is_ready(const BasisLabel& label) const;
    bool is_realized(const BasisLabel& label) const;
    /// No edge has a ready source.
    bool is_truncated() const;
    bool operator==(const HamiltonianScope&) const = default;
};

/// nRule 1: irreversible + discontinuous gives a ready component.
Status classify(const Component& parent, const BasisLabel& candidate, EdgeKind interaction,
                RabiOnset onset = RabiOnset::Delayed);

/// nRule 4: drops every edge that leaves a ready component.
HamiltonianScope truncate(HamiltonianScope scope);

inline constexpr int kMaxComponents = 8;

/// Index form of a truncated scope, rebuilt at every launch so the hot loop
/// touches only fixed-size arrays.
struct StepKernel {
    struct Coupling {  // d c[target]/dt += -i h c[source], both realized
        std::uint8_t target, source;
        double h;
    };
    struct Inflow {  // ready slot <- realized slot
        std::uint8_t ready, source;
        double coupling;  // h for laser edges, decay rate for spontaneous ones
        bool spontaneous;
    };

    int n_realized = 0;
    int n_ready = 0;
    int n_couplings = 0;
    int n_inflows = 0;
    std::array<std::uint8_t, kMaxComponents> realized{};  // component indices
    std::array<std::uint8_t, kMaxComponents> ready{};
    std::array<bool, kMaxComponents> ready_is_sink{};
    std::array<double, kMaxComponents> half_damping{};  // per realized slot
    std::array<Coupling, 2 * kMaxComponents> couplings{};
    std::array<Inflow, kMaxComponents> inflows{};
    double rabi_frequency = 0;    // generalized Rabi frequency of the realized block
    double max_damping = 0;       // largest decay rate of a realized component
    double laser_inflow_sq = 0;   // sum of h^2 over truncated laser edges
    double max_sink_rate = 0;     // largest decay rate feeding a ready sink
};

struct SystemState {
    double time = 0;
    std::vector<Component> components;
    HamiltonianScope scope;  // truncated
    double s = 0;            // recomputed total square modulus
    TrajectoryRng rng;
    std::uint64_t draw_index = 0;  // per-step substream counter
    /// Modulus at launch plus inflow through truncated laser edges, whose
    /// sources are not depleted. Equals s up to integration error.
    double expected_s = 0;
    StepKernel kernel;

    double recompute_s() const;
    double realized_square_modulus() const;
    std::optional<std::size_t> find(const BasisLabel& label) const;
};

class ModelProgram;

/// Rebuilds `state.kernel` from `state.scope`; throws StateError if the scope
/// is not truncated or exceeds kMaxComponents.
void compile_kernel(SystemState& state);

/// Starts the post-collapse solution from `chosen`: renormalized to unit
/// modulus, realized, with the program's partners and successors at zero.
SystemState launch(const Component& chosen, const ModelProgram& program, double time,
                   const TrajectoryRng& rng, std::uint64_t draw_index = 0);

/// Text adjacency listing: one line per component, then one per edge.
void dump_graph(std::ostream& out, const SystemState& state);
std::string dump_graph(const SystemState& state);

}  // namespace shelving
