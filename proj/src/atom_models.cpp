#include "shelving/atom_models.hpp"

#include "shelving/error.hpp"

#include <algorithm>
#include <deque>

namespace shelving {

namespace {

constexpr Level kShelf = Level::A2;

BasisLabel absorb(BasisLabel label, const Leg& leg) {
    label.level = leg.upper;
    (leg.channel == Channel::Strong ? label.strong_absorbed : label.weak_absorbed) += 1;
    return label;
}

BasisLabel stimulate(BasisLabel label, const Leg& leg) {
    label.level = leg.lower;
    (leg.channel == Channel::Strong ? label.strong_absorbed : label.weak_absorbed) -= 1;
    return label;
}

BasisLabel emit(BasisLabel label, const Leg& leg) {
    label.level = leg.lower;
    (leg.channel == Channel::Strong ? label.strong_emitted : label.weak_emitted) += 1;
    label.last_emitted = leg.channel;
    return label;
}

bool contains(const std::vector<Component>& comps, const BasisLabel& label) {
    return std::any_of(comps.begin(), comps.end(), [&](const Component& c) { return c.label == label; });
}

bool has_level(const std::vector<Component>& comps, Level level) {
    return std::any_of(comps.begin(), comps.end(), [&](const Component& c) {
        return c.status == Status::Realized && c.label.level == level;
    });
}

Leg make_leg(Channel channel, Level lower, Level upper, const LevelScheme& s) {
    const bool strong = channel == Channel::Strong;
    return {channel,
            lower,
            upper,
            0.5 * (strong ? s.omega_strong : s.omega_weak),
            strong ? s.gamma_strong : s.gamma_weak,
            strong ? s.n_strong_photons : s.n_weak_photons};
}

}  // namespace

std::string_view to_string(EmissionOrdering ordering) {
    switch (ordering) {
        case EmissionOrdering::WeakAfterDark: return "weak after dark";
        case EmissionOrdering::WeakBeforeDark: return "weak before dark";
        case EmissionOrdering::NotApplicable: return "n/a";
    }
    return "?";
}

ModelProgram::ModelProgram(LevelScheme scheme, std::vector<Leg> legs, Level initial_level,
                           EmissionOrdering ordering, ModelOptions options)
    : scheme_(scheme), legs_(std::move(legs)), initial_level_(initial_level), ordering_(ordering),
      options_(options) {}

const Leg* ModelProgram::leg(Channel channel) const {
    for (const auto& l : legs_)
        if (l.channel == channel) return &l;
    return nullptr;
}

BasisLabel ModelProgram::initial_label() const { return BasisLabel{.level = initial_level_}; }

bool ModelProgram::can_absorb(const Leg& leg, const BasisLabel& label) const {
    const auto used = leg.channel == Channel::Strong ? label.strong_absorbed : label.weak_absorbed;
    return used < leg.reservoir;
}

Arrival ModelProgram::arrival_of(const Component& ready) {
    if (!ready.gap) return {ArrivalKind::Initial, Channel::Strong};
    if (ready.gap->kind == EdgeKind::SpontaneousEmission) return {ArrivalKind::Emission, ready.gap->channel};
    return {ArrivalKind::Absorption, ready.gap->channel};
}

LaunchPlan ModelProgram::expand_local(const BasisLabel& launched, Arrival arrival) const {
    LaunchPlan plan;
    auto& comps = plan.components;
    auto& edges = plan.scope.edges;
    comps.push_back({launched, {}, Status::Realized, std::nullopt});

    // Coherent closure: immediate onset always, delayed onset only when the
    // shelf is entered by absorption (the radiationless resonance path).
    const bool closure = onset() == RabiOnset::Immediate ||
                         (arrival.kind == ArrivalKind::Absorption && launched.level == kShelf);
    if (closure) {
        std::deque<BasisLabel> queue{launched};
        while (!queue.empty()) {
            const auto x = queue.front();
            queue.pop_front();
            for (const auto& leg : legs_) {
                std::optional<BasisLabel> y;
                if (x.level == leg.lower && can_absorb(leg, x)) y = absorb(x, leg);
                if (x.level == leg.upper) y = stimulate(x, leg);
                if (y && !has_level(comps, y->level)) {
                    comps.push_back({*y, {}, Status::Realized, std::nullopt});
                    queue.push_back(*y);
                }
            }
        }
    } else if (arrival.kind == ArrivalKind::Absorption && scheme_.stimulated_emission) {
        if (const Leg* l = leg(arrival.channel)) {
            const Component parent{launched, {}, Status::Realized, std::nullopt};
            const auto partner = stimulate(launched, *l);
            if (classify(parent, partner, EdgeKind::StimulatedEmission, onset()) == Status::Realized)
                comps.push_back({partner, {}, Status::Realized, std::nullopt});
        }
    }

    const auto n_realized = comps.size();
    for (std::size_t i = 0; i < n_realized; ++i) {
        for (std::size_t j = 0; j < n_realized; ++j) {
            for (const auto& leg : legs_) {
                const auto& x = comps[i].label;
                if (x.level != leg.lower || !can_absorb(leg, x) || absorb(x, leg) != comps[j].label) continue;
                edges.push_back({x, comps[j].label, EdgeKind::LaserAbsorption, leg.channel, leg.half_rabi});
                edges.push_back({comps[j].label, x, EdgeKind::StimulatedEmission, leg.channel, leg.half_rabi});
            }
        }
    }

    int gap_id = 0;
    for (std::size_t i = 0; i < n_realized; ++i) {
        const auto parent = comps[i];
        for (const auto& leg : legs_) {
            std::optional<BasisLabel> y;
            EdgeKind kind{};
            double coupling = 0;
            if (onset() == RabiOnset::Delayed && parent.label.level == leg.lower && can_absorb(leg, parent.label)) {
                y = absorb(parent.label, leg);
                kind = EdgeKind::LaserAbsorption;
                coupling = leg.half_rabi;
                if (contains(comps, *y)) y.reset();
            }
            if (y) {
                if (classify(parent, *y, kind, onset()) != Status::Ready)
                    throw StateError("absorption successor not ready in delayed onset");
                comps.push_back({*y, {}, Status::Ready, Gap{++gap_id, kind, leg.channel}});
                edges.push_back({parent.label, *y, kind, leg.channel, coupling});
            }
            if (parent.label.level == leg.upper && options_.spontaneous_decay && leg.decay > 0) {
                const auto sink = emit(parent.label, leg);
                const auto status = classify(parent, sink, EdgeKind::SpontaneousEmission, onset());
                comps.push_back({sink, {}, status, Gap{++gap_id, EdgeKind::SpontaneousEmission, leg.channel}});
                edges.push_back({parent.label, sink, EdgeKind::SpontaneousEmission, leg.channel, leg.decay});
            }
        }
    }

    for (const auto& c : comps)
        (c.status == Status::Ready ? plan.scope.ready : plan.scope.realized).push_back(c.label);
    return plan;
}

LaunchPlan ModelProgram::expand(const BasisLabel& launched, Arrival arrival) const {
    auto plan = expand_local(launched, arrival);
    // Terms beyond each gap (what the ready component would drive if it were
    // launched). They belong to the full scope and are removed by truncate().
    std::vector<Edge> beyond;
    for (const auto& c : plan.components) {
        if (c.status != Status::Ready) continue;
        const auto next = expand_local(c.label, arrival_of(c));
        for (const auto& e : next.scope.edges)
            if (e.source == c.label) beyond.push_back(e);
    }
    plan.scope.edges.insert(plan.scope.edges.end(), beyond.begin(), beyond.end());
    return plan;
}

SystemState ModelProgram::initial_state(std::uint64_t seed, std::uint64_t trajectory) const {
    auto plan = expand(initial_label(), {ArrivalKind::Initial, Channel::Strong});
    SystemState state;
    state.components = std::move(plan.components);
    state.components.front().amplitude = 1.0;
    state.scope = truncate(std::move(plan.scope));
    state.rng = TrajectoryRng(seed, trajectory);
    state.s = state.recompute_s();
    state.expected_s = state.s;
    compile_kernel(state);
    return state;
}

ModelProgram two_level_model(const LevelScheme& scheme, ModelOptions options) {
    return ModelProgram(scheme, {make_leg(Channel::Strong, Level::A0, Level::A1, scheme)}, Level::A0,
                        EmissionOrdering::NotApplicable, options);
}

ModelProgram three_level_v_model(const LevelScheme& scheme, ModelOptions options) {
    if (scheme.config != ConfigurationKind::V)
        throw ConfigError("configuration", "three_level_v_model needs V, got " +
                                               std::string(to_string(scheme.config)));
    return ModelProgram(scheme,
                        {make_leg(Channel::Strong, Level::A0, Level::A1, scheme),
                         make_leg(Channel::Weak, Level::A0, Level::A2, scheme)},
                        Level::A0, EmissionOrdering::WeakAfterDark, options);
}

ModelProgram build_configuration(const LevelScheme& scheme, ModelOptions options) {
    switch (scheme.config) {
        case ConfigurationKind::V: return three_level_v_model(scheme, options);
        case ConfigurationKind::Lambda:
            return ModelProgram(scheme,
                                {make_leg(Channel::Strong, Level::A1, Level::A0, scheme),
                                 make_leg(Channel::Weak, Level::A2, Level::A0, scheme)},
                                Level::A1, EmissionOrdering::WeakBeforeDark, options);
        case ConfigurationKind::CascadeUp:
            return ModelProgram(scheme,
                                {make_leg(Channel::Strong, Level::A0, Level::A1, scheme),
                                 make_leg(Channel::Weak, Level::A2, Level::A0, scheme)},
                                Level::A0, EmissionOrdering::WeakBeforeDark, options);
        case ConfigurationKind::CascadeDown:
            return ModelProgram(scheme,
                                {make_leg(Channel::Strong, Level::A1, Level::A0, scheme),
                                 make_leg(Channel::Weak, Level::A0, Level::A2, scheme)},
                                Level::A1, EmissionOrdering::WeakAfterDark, options);
    }
    throw ConfigError("configuration", "unknown configuration");
}

}  // namespace shelving
