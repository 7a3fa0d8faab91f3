#include "shelving/component_graph.hpp"

#include "shelving/atom_models.hpp"
#include "shelving/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace shelving {

std::string_view to_string(Level level) {
    switch (level) {
        case Level::A0: return "a0";
        case Level::A1: return "a1";
        case Level::A2: return "a2";
    }
    return "?";
}

std::string_view to_string(Status status) { return status == Status::Ready ? "ready" : "realized"; }

std::string_view to_string(EdgeKind kind) {
    switch (kind) {
        case EdgeKind::LaserAbsorption: return "absorption";
        case EdgeKind::StimulatedEmission: return "stimulated";
        case EdgeKind::SpontaneousEmission: return "spontaneous";
    }
    throw StateError("unknown edge kind");
}

EdgeKind parse_edge_kind(std::string_view text) {
    if (text == "absorption") return EdgeKind::LaserAbsorption;
    if (text == "stimulated") return EdgeKind::StimulatedEmission;
    if (text == "spontaneous") return EdgeKind::SpontaneousEmission;
    throw StateError("unknown edge kind '" + std::string(text) + "'");
}

std::string format_label(const BasisLabel& l) {
    std::string out(to_string(l.level));
    out += "[abs " + std::to_string(l.strong_absorbed) + "," + std::to_string(l.weak_absorbed) + " emit " +
           std::to_string(l.strong_emitted) + "," + std::to_string(l.weak_emitted);
    if (l.last_emitted) out += " +" + std::string(to_string(*l.last_emitted));
    return out + "]";
}

bool HamiltonianScope::is_ready(const BasisLabel& label) const {
    return std::find(ready.begin(), ready.end(), label) != ready.end();
}

bool HamiltonianScope::is_realized(const BasisLabel& label) const {
    return std::find(realized.begin(), realized.end(), label) != realized.end();
}

bool HamiltonianScope::is_truncated() const {
    return std::none_of(edges.begin(), edges.end(), [&](const Edge& e) { return is_ready(e.source); });
}

Status classify(const Component& parent, const BasisLabel& candidate, EdgeKind interaction, RabiOnset onset) {
    switch (interaction) {
        case EdgeKind::SpontaneousEmission:
            if (candidate.emitted() <= parent.label.emitted())
                throw StateError("spontaneous edge must grow the emission record");
            return Status::Ready;
        case EdgeKind::LaserAbsorption:
            return onset == RabiOnset::Delayed && candidate.level != parent.label.level ? Status::Ready
                                                                                         : Status::Realized;
        case EdgeKind::StimulatedEmission: return Status::Realized;
    }
    throw StateError("unknown edge kind");
}

HamiltonianScope truncate(HamiltonianScope scope) {
    std::erase_if(scope.edges, [&](const Edge& e) { return scope.is_ready(e.source); });
    return scope;
}

double SystemState::recompute_s() const {
    double total = 0;
    for (const auto& c : components) total += c.square_modulus();
    return total;
}

double SystemState::realized_square_modulus() const {
    double total = 0;
    for (const auto& c : components)
        if (c.status == Status::Realized) total += c.square_modulus();
    return total;
}

std::optional<std::size_t> SystemState::find(const BasisLabel& label) const {
    for (std::size_t i = 0; i < components.size(); ++i)
        if (components[i].label == label) return i;
    return std::nullopt;
}

SystemState launch(const Component& chosen, const ModelProgram& program, double time, const TrajectoryRng& rng,
                   std::uint64_t draw_index) {
    if (chosen.status != Status::Ready || !chosen.gap) throw StateError("launch: chosen component is not ready");
    auto plan = program.expand(chosen.label, ModelProgram::arrival_of(chosen));
    SystemState state;
    state.time = time;
    state.components = std::move(plan.components);
    const double mod = std::abs(chosen.amplitude);
    state.components.front().amplitude = mod > 0 ? chosen.amplitude / mod : Amplitude{1.0, 0.0};
    state.scope = truncate(std::move(plan.scope));
    state.rng = rng;
    state.draw_index = draw_index;
    state.s = state.recompute_s();
    state.expected_s = state.s;
    compile_kernel(state);
    return state;
}

void dump_graph(std::ostream& out, const SystemState& state) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "t=%.6f s=%.12f\n", state.time, state.s);
    out << buf;
    for (std::size_t i = 0; i < state.components.size(); ++i) {
        const auto& c = state.components[i];
        std::snprintf(buf, sizeof buf, " amp=(%.6e,%.6e)", c.amplitude.real(), c.amplitude.imag());
        out << "component " << i << ' ' << to_string(c.status) << ' ' << format_label(c.label) << buf;
        if (c.gap)
            out << " gap=" << c.gap->id << ' ' << to_string(c.gap->kind) << ' ' << to_string(c.gap->channel);
        out << '\n';
    }
    for (const auto& e : state.scope.edges) {
        std::snprintf(buf, sizeof buf, " %.6g", e.coupling);
        out << "edge " << format_label(e.source) << " -> " << format_label(e.target) << ' ' << to_string(e.kind)
            << ' ' << to_string(e.channel) << buf << '\n';
    }
}

std::string dump_graph(const SystemState& state) {
    std::ostringstream ss;
    dump_graph(ss, state);
    return ss.str();
}

}  // namespace shelving
