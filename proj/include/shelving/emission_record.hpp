#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace shelving {

enum class Channel : std::uint8_t { Strong, Weak };

std::string_view to_string(Channel channel);
Channel parse_channel(std::string_view text);

struct Emission {
    double time = 0;
    Channel channel = Channel::Strong;
    bool operator==(const Emission&) const = default;
};

/// Photon emissions of one trajectory, in time order.
struct EmissionRecord {
    std::vector<Emission> emissions;

    std::size_t size() const { return emissions.size(); }
    bool empty() const { return emissions.empty(); }
    std::size_t count(Channel channel) const;
    bool is_valid() const;  // sorted, finite, non-negative times
    bool operator==(const EmissionRecord&) const = default;
};

/// One record per trajectory, indexed by trajectory id, all over [0, t_max].
struct Ensemble {
    double t_max = 0;
    std::vector<EmissionRecord> trajectories;

    std::size_t total_emissions() const;
    bool operator==(const Ensemble&) const = default;
};

/// CSV with header `trajectory_id,time,channel`; times written in shortest
/// round-trip form.
void write_csv(std::ostream& out, const Ensemble& ensemble);
void write_csv_file(const std::string& path, const Ensemble& ensemble);

/// Reads rows back; trajectories without rows are filled up to `n_trajectories`.
Ensemble read_csv(std::istream& in, double t_max, std::size_t n_trajectories = 0);
Ensemble read_csv_file(const std::string& path, double t_max, std::size_t n_trajectories = 0);

}  // namespace shelving
