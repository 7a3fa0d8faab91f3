#include "shelving/level_scheme.hpp"

#include "shelving/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace shelving {

namespace {

std::string_view trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

const std::string& require(const SchemeConfig& raw, const std::string& key) {
    auto it = raw.find(key);
    if (it == raw.end()) throw ConfigError(key, "missing");
    return it->second;
}

double parse_double(const std::string& key, std::string_view text) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
        throw ConfigError(key, "not a finite number: '" + std::string(text) + "'");
    return v;
}

std::int64_t parse_count(const std::string& key, std::string_view text) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec == std::errc{} && ptr == text.data() + text.size()) return v;
    // Accept integral values written in floating notation, e.g. 1e6.
    const double d = parse_double(key, text);
    if (d != std::floor(d) || std::abs(d) > 9.0e18)
        throw ConfigError(key, "not an integer: '" + std::string(text) + "'");
    return static_cast<std::int64_t>(d);
}

bool parse_switch(const std::string& key, std::string_view text) {
    if (text == "on" || text == "true" || text == "1") return true;
    if (text == "off" || text == "false" || text == "0") return false;
    throw ConfigError(key, "expected on|off, got '" + std::string(text) + "'");
}

double positive(const std::string& key, double v) {
    if (!(v > 0)) throw ConfigError(key, "must be positive");
    return v;
}

constexpr std::array kKnownKeys{
    "configuration", "gamma_strong",     "gamma_weak",          "omega_strong",
    "omega_weak",    "n_strong_photons", "n_weak_photons",      "rabi_onset",
    "stimulated_emission", "time_unit_seconds"};

}  // namespace

std::string_view to_string(ConfigurationKind kind) {
    switch (kind) {
        case ConfigurationKind::V: return "V";
        case ConfigurationKind::Lambda: return "Lambda";
        case ConfigurationKind::CascadeUp: return "CascadeUp";
        case ConfigurationKind::CascadeDown: return "CascadeDown";
    }
    return "?";
}

std::string_view to_string(RabiOnset onset) {
    return onset == RabiOnset::Delayed ? "delayed" : "immediate";
}

ConfigurationKind parse_configuration(std::string_view text) {
    if (text == "V") return ConfigurationKind::V;
    if (text == "Lambda") return ConfigurationKind::Lambda;
    if (text == "CascadeUp" || text == "CascadeE1aboveE0") return ConfigurationKind::CascadeUp;
    if (text == "CascadeDown" || text == "CascadeE1belowE0") return ConfigurationKind::CascadeDown;
    throw ConfigError("configuration",
                      "expected V|Lambda|CascadeUp|CascadeDown, got '" + std::string(text) + "'");
}

LevelScheme build_scheme(const SchemeConfig& raw) {
    for (const auto& [key, value] : raw) {
        bool known = false;
        for (auto k : kKnownKeys) known = known || key == k;
        if (!known) throw ConfigError(key, "unknown key");
    }

    LevelScheme s;
    s.config = parse_configuration(require(raw, "configuration"));
    s.gamma_strong = positive("gamma_strong", parse_double("gamma_strong", require(raw, "gamma_strong")));
    s.gamma_weak = positive("gamma_weak", parse_double("gamma_weak", require(raw, "gamma_weak")));
    s.omega_strong = positive("omega_strong", parse_double("omega_strong", require(raw, "omega_strong")));
    s.omega_weak = positive("omega_weak", parse_double("omega_weak", require(raw, "omega_weak")));
    s.n_strong_photons = parse_count("n_strong_photons", require(raw, "n_strong_photons"));
    s.n_weak_photons = parse_count("n_weak_photons", require(raw, "n_weak_photons"));

    if (s.gamma_weak >= s.gamma_strong)
        throw ConfigError("gamma_weak", "weak decay must be slower than gamma_strong");
    if (s.n_strong_photons < 1) throw ConfigError("n_strong_photons", "must be at least 1");
    if (s.n_weak_photons < 1) throw ConfigError("n_weak_photons", "must be at least 1");

    if (auto it = raw.find("rabi_onset"); it != raw.end()) {
        if (it->second == "delayed") s.rabi_onset = RabiOnset::Delayed;
        else if (it->second == "immediate") s.rabi_onset = RabiOnset::Immediate;
        else throw ConfigError("rabi_onset", "expected delayed|immediate, got '" + it->second + "'");
    }
    if (auto it = raw.find("stimulated_emission"); it != raw.end())
        s.stimulated_emission = parse_switch("stimulated_emission", it->second);
    if (auto it = raw.find("time_unit_seconds"); it != raw.end())
        s.time_unit_seconds =
            positive("time_unit_seconds", parse_double("time_unit_seconds", it->second));
    return s;
}

SchemeConfig to_config(const LevelScheme& s) {
    SchemeConfig c;
    c["configuration"] = std::string(to_string(s.config));
    c["gamma_strong"] = format_double(s.gamma_strong);
    c["gamma_weak"] = format_double(s.gamma_weak);
    c["omega_strong"] = format_double(s.omega_strong);
    c["omega_weak"] = format_double(s.omega_weak);
    c["n_strong_photons"] = std::to_string(s.n_strong_photons);
    c["n_weak_photons"] = std::to_string(s.n_weak_photons);
    c["rabi_onset"] = std::string(to_string(s.rabi_onset));
    c["stimulated_emission"] = s.stimulated_emission ? "on" : "off";
    c["time_unit_seconds"] = format_double(s.time_unit_seconds);
    return c;
}

std::string serialize(const LevelScheme& scheme) {
    std::string out = "[scheme]\n";
    for (const auto& [k, v] : to_config(scheme)) out += k + " = " + v + "\n";
    return out;
}

SchemeConfig parse_config_text(std::string_view text) {
    SchemeConfig c;
    int line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no), "expected key = value");
        std::string key(trim(line.substr(0, eq)));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no), "empty key");
        c[key] = std::string(trim(line.substr(eq + 1)));
    }
    return c;
}

SchemeConfig read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("scheme", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string scheme_hash(const LevelScheme& scheme) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : serialize(scheme)) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

LevelScheme desk_scale_scheme(ConfigurationKind kind) {
    LevelScheme s;
    s.config = kind;
    return s;
}

}  // namespace shelving
