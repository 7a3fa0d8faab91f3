#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace shelving {

enum class ConfigurationKind { V, Lambda, CascadeUp, CascadeDown };
enum class RabiOnset { Delayed, Immediate };

std::string_view to_string(ConfigurationKind kind);
std::string_view to_string(RabiOnset onset);
ConfigurationKind parse_configuration(std::string_view text);

/// Physical model. Rates and couplings are in scheme units; `time_unit_seconds`
/// converts them to SI for reporting only.
struct LevelScheme {
    ConfigurationKind config = ConfigurationKind::V;
    double gamma_strong = 1.0;
    double gamma_weak = 0.005;
    double omega_strong = 0.3;
    double omega_weak = 0.002;
    std::int64_t n_strong_photons = 1'000'000;
    std::int64_t n_weak_photons = 1'000'000;
    RabiOnset rabi_onset = RabiOnset::Delayed;
    bool stimulated_emission = false;
    double time_unit_seconds = 1.0;

    bool operator==(const LevelScheme&) const = default;
};

/// Raw key=value pairs as read from a scheme file.
using SchemeConfig = std::map<std::string, std::string, std::less<>>;

/// Validates and converts; throws ConfigError naming the field.
LevelScheme build_scheme(const SchemeConfig& raw);

SchemeConfig to_config(const LevelScheme& scheme);
std::string serialize(const LevelScheme& scheme);

/// Parses `key = value` lines. `#` starts a comment, `[section]` headers are ignored.
SchemeConfig parse_config_text(std::string_view text);
SchemeConfig read_config_file(const std::string& path);

/// Stable 64-bit FNV-1a of the serialized scheme, as 16 hex digits.
std::string scheme_hash(const LevelScheme& scheme);

/// gamma_strong = 1, 200:1 decay ratio, omega 0.3 / 0.002, N = M = 10^6.
LevelScheme desk_scale_scheme(ConfigurationKind kind = ConfigurationKind::V);

/// Decay rate in 1/time from a lifetime.
constexpr double rate_from_lifetime(double lifetime) { return 1.0 / lifetime; }

}  // namespace shelving
