#pragma once

#include "shelving/component_graph.hpp"
#include "shelving/level_scheme.hpp"

#include <span>
#include <vector>

namespace shelving {

/// One laser-driven, spontaneously decaying transition.
struct Leg {
    Channel channel = Channel::Strong;
    Level lower = Level::A0;
    Level upper = Level::A1;
    double half_rabi = 0;  // coupling h in H = h(|lower><upper| + h.c.)
    double decay = 0;
    std::int64_t reservoir = 0;  // laser photons available
};

/// Which side of a dark period the weak photon falls on.
enum class EmissionOrdering { WeakAfterDark, WeakBeforeDark, NotApplicable };
std::string_view to_string(EmissionOrdering ordering);

enum class ArrivalKind { Initial, Emission, Absorption };
struct Arrival {
    ArrivalKind kind = ArrivalKind::Initial;
    Channel channel = Channel::Strong;  // leg used, for absorption
};

struct ModelOptions {
    bool spontaneous_decay = true;  // false removes every sink (radiationless runs)
};

/// Components and full (untruncated) scope around a launched label. The
/// launched component is first, with zero amplitude.
struct LaunchPlan {
    std::vector<Component> components;
    HamiltonianScope scope;
};

class ModelProgram {
public:
    ModelProgram(LevelScheme scheme, std::vector<Leg> legs, Level initial_level,
                 EmissionOrdering ordering, ModelOptions options);

    const LevelScheme& scheme() const { return scheme_; }
    RabiOnset onset() const { return scheme_.rabi_onset; }
    std::span<const Leg> legs() const { return legs_; }
    const Leg* leg(Channel channel) const;
    const ModelOptions& options() const { return options_; }
    EmissionOrdering expected_ordering() const { return ordering_; }
    BasisLabel initial_label() const;

    /// The transition rules: Rabi partners and ready successors of `launched`.
    LaunchPlan expand(const BasisLabel& launched, Arrival arrival) const;

    SystemState initial_state(std::uint64_t seed, std::uint64_t trajectory) const;

    /// Ready successors carry the arrival they would launch with.
    static Arrival arrival_of(const Component& ready);

private:
    LaunchPlan expand_local(const BasisLabel& launched, Arrival arrival) const;
    bool can_absorb(const Leg& leg, const BasisLabel& label) const;

    LevelScheme scheme_;
    std::vector<Leg> legs_;
    Level initial_level_;
    EmissionOrdering ordering_;
    ModelOptions options_;
};

/// Strong drive only, ground a0, excited a1.
ModelProgram two_level_model(const LevelScheme& scheme, ModelOptions options = {});
/// Requires scheme.config == V.
ModelProgram three_level_v_model(const LevelScheme& scheme, ModelOptions options = {});
ModelProgram build_configuration(const LevelScheme& scheme, ModelOptions options = {});

}  // namespace shelving
