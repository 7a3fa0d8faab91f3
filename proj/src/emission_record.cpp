#include "shelving/emission_record.hpp"

#include "shelving/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace shelving {

std::string_view to_string(Channel channel) {
    return channel == Channel::Strong ? "strong" : "weak";
}

Channel parse_channel(std::string_view text) {
    if (text == "strong") return Channel::Strong;
    if (text == "weak") return Channel::Weak;
    throw ConfigError("channel", "unknown channel '" + std::string(text) + "'");
}

std::size_t EmissionRecord::count(Channel channel) const {
    return static_cast<std::size_t>(std::count_if(
        emissions.begin(), emissions.end(), [&](const Emission& e) { return e.channel == channel; }));
}

bool EmissionRecord::is_valid() const {
    double prev = 0;
    for (const auto& e : emissions) {
        if (!std::isfinite(e.time) || e.time < prev) return false;
        prev = e.time;
    }
    return true;
}

std::size_t Ensemble::total_emissions() const {
    std::size_t n = 0;
    for (const auto& r : trajectories) n += r.size();
    return n;
}

void write_csv(std::ostream& out, const Ensemble& ensemble) {
    out << "trajectory_id,time,channel\n";
    std::array<char, 64> buf{};
    for (std::size_t id = 0; id < ensemble.trajectories.size(); ++id) {
        for (const auto& e : ensemble.trajectories[id].emissions) {
            auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), e.time);
            out << id << ',' << std::string_view(buf.data(), end - buf.data()) << ','
                << to_string(e.channel) << '\n';
        }
    }
}

void write_csv_file(const std::string& path, const Ensemble& ensemble) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    write_csv(out, ensemble);
}

Ensemble read_csv(std::istream& in, double t_max, std::size_t n_trajectories) {
    Ensemble ens;
    ens.t_max = t_max;
    ens.trajectories.resize(n_trajectories);
    std::string line;
    if (!std::getline(in, line) || line.rfind("trajectory_id,time,channel", 0) != 0)
        throw AnalysisError("emissions CSV: missing header");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw AnalysisError("emissions CSV line " + std::to_string(line_no) + ": expected 3 columns");
        std::size_t id = 0;
        double t = 0;
        auto r1 = std::from_chars(line.data(), line.data() + c1, id);
        auto r2 = std::from_chars(line.data() + c1 + 1, line.data() + c2, t);
        if (r1.ec != std::errc{} || r2.ec != std::errc{})
            throw AnalysisError("emissions CSV line " + std::to_string(line_no) + ": bad number");
        if (id >= ens.trajectories.size()) ens.trajectories.resize(id + 1);
        Channel ch;
        try {
            ch = parse_channel(std::string_view(line).substr(c2 + 1));
        } catch (const ConfigError&) {
            throw AnalysisError("emissions CSV line " + std::to_string(line_no) + ": bad channel");
        }
        ens.trajectories[id].emissions.push_back({t, ch});
    }
    for (auto& r : ens.trajectories)
        if (!r.is_valid()) throw AnalysisError("emissions CSV: times not sorted within a trajectory");
    return ens;
}

Ensemble read_csv_file(const std::string& path, double t_max, std::size_t n_trajectories) {
    std::ifstream in(path);
    if (!in) throw AnalysisError("cannot open '" + path + "'");
    return read_csv(in, t_max, n_trajectories);
}

}  // namespace shelving
