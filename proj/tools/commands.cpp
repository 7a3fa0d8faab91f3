#include "commands.hpp"

#include "shelving/analysis.hpp"
#include "shelving/atom_models.hpp"
#include "shelving/ensemble.hpp"
#include "shelving/error.hpp"
#include "shelving/level_scheme.hpp"
#include "shelving/oracle.hpp"

#include <json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace fs = std::filesystem;

namespace shelving::cli {

namespace {

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    T v{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError(key, "not a valid number: '" + text + "'");
    return v;
}

LevelScheme load_scheme(const std::string& path) {
    if (path.empty()) throw ConfigError("scheme", "no scheme file given");
    return build_scheme(read_config_file(path));
}

fs::path ensure_dir(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw ConfigError("out", "cannot create '" + dir + "': " + ec.message());
    return p;
}

}  // namespace

void apply_run_config(RunManifest& m, const std::string& path) {
    for (const auto& [key, value] : read_config_file(path)) {
        if (key == "scheme") m.scheme_path = value;
        else if (key == "trajectories" || key == "n_trajectories")
            m.n_trajectories = parse_number<std::size_t>(key, value);
        else if (key == "t_max") m.t_max = parse_number<double>(key, value);
        else if (key == "seed" || key == "base_seed") m.base_seed = parse_number<std::uint64_t>(key, value);
        else if (key == "engine") m.engine = value;
        else if (key == "out" || key == "output_dir") m.output_dir = value;
        else throw ConfigError(key, "unknown run config key");
    }
}

void validate(const RunManifest& m) {
    if (m.n_trajectories < 1) throw ConfigError("trajectories", "must be at least 1");
    if (!(m.t_max >= 0)) throw ConfigError("t_max", "must be non-negative");
    if (m.engine != "nrules" && m.engine != "mcwf") throw ConfigError("engine", "expected nrules|mcwf");
}

void cmd_run(const RunManifest& m, std::ostream& log) {
    validate(m);
    const auto scheme = load_scheme(m.scheme_path);
    const auto dir = ensure_dir(m.output_dir);

    Ensemble ens;
    nlohmann::ordered_json stats = nlohmann::ordered_json::object();
    if (m.engine == "nrules") {
        auto res = run_ensemble(build_configuration(scheme), m.t_max, m.n_trajectories, m.base_seed);
        ens = std::move(res.ensemble);
        stats = {{"steps", res.stats.steps},
                 {"rejected_steps", res.stats.rejected_steps},
                 {"collapses", res.stats.collapses},
                 {"max_norm_drift", res.stats.max_norm_drift}};
    } else {
        ens = mcwf_ensemble(scheme, m.t_max, m.n_trajectories, m.base_seed);
    }
    ens.trajectories.resize(m.n_trajectories);

    write_csv_file((dir / "emissions.csv").string(), ens);
    nlohmann::ordered_json j;
    j["scheme_path"] = m.scheme_path;
    j["scheme_hash"] = scheme_hash(scheme);
    nlohmann::ordered_json sj;
    for (const auto& [k, v] : to_config(scheme)) sj[k] = v;
    j["scheme"] = sj;
    j["n_trajectories"] = m.n_trajectories;
    j["t_max"] = m.t_max;
    j["base_seed"] = m.base_seed;
    j["engine"] = m.engine;
    j["output_dir"] = m.output_dir;
    j["emissions"] = {{"strong", 0}, {"weak", 0}};
    std::size_t ns = 0, nw = 0;
    for (const auto& r : ens.trajectories) ns += r.count(Channel::Strong), nw += r.count(Channel::Weak);
    j["emissions"] = {{"strong", ns}, {"weak", nw}};
    j["engine_stats"] = stats;
    std::ofstream(dir / "manifest.json") << j.dump(2) << '\n';
    log << "wrote " << (dir / "emissions.csv").string() << " (" << ns << " strong, " << nw << " weak)\n";
}

void cmd_oracle(const std::string& scheme_path, const std::string& output_dir, std::ostream& log) {
    const auto scheme = load_scheme(scheme_path);
    const auto report = telegraph_report(scheme);
    const auto path = ensure_dir(output_dir) / oracle_file_name(scheme);
    write_oracle_json(path.string(), scheme, report);
    log << "wrote " << path.string() << " beta1=" << report.params.beta1 << " lambda2=" << report.params.lambda2
        << '\n';
}

bool cmd_analyze(const AnalyzeOptions& o, std::ostream& log) {
    if (o.emissions_path.empty() || !fs::exists(o.emissions_path))
        throw AnalysisError("emissions file '" + o.emissions_path + "' not found");
    const fs::path manifest_path =
        o.manifest_path.empty() ? fs::path(o.emissions_path).parent_path() / "manifest.json" : fs::path(o.manifest_path);
    if (!fs::exists(manifest_path)) throw AnalysisError("manifest '" + manifest_path.string() + "' not found");

    nlohmann::json manifest;
    try {
        std::ifstream(manifest_path) >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw AnalysisError("manifest '" + manifest_path.string() + "': " + e.what());
    }
    const double t_max = manifest.value("t_max", 0.0);
    const auto n = manifest.value("n_trajectories", std::size_t{0});
    const auto ens = read_csv_file(o.emissions_path, t_max, n);

    ReportOptions ropt;
    ropt.gap_threshold = o.gap_threshold;
    ropt.fit.t_min = o.fit_t_min;
    if (manifest.contains("scheme") && manifest["scheme"].contains("configuration")) {
        const auto kind = parse_configuration(manifest["scheme"]["configuration"].get<std::string>());
        ropt.expected_ordering =
            kind == ConfigurationKind::V || kind == ConfigurationKind::CascadeDown ? "after" : "before";
    }
    RateTargets targets;
    if (!o.oracle_path.empty()) {
        const auto oracle = read_oracle_json(o.oracle_path);
        targets.fast_rate = oracle.params.beta1 / 2;
        targets.slow_rate = oracle.params.lambda2;
        targets.mean_dark = 1.0 / oracle.params.lambda2;
    }

    Histogram hist;
    bool passed = false;
    const auto report = analysis_report_json(ens, targets, ropt, &hist, &passed);
    const auto dir = ensure_dir(o.output_dir);
    std::ofstream(dir / "report.json") << report;
    std::ofstream csv(dir / "histogram.csv");
    write_histogram_csv(csv, hist);
    log << "wrote " << (dir / "report.json").string() << (passed ? " (all checks passed)" : " (checks failed)")
        << '\n';
    return passed;
}

}  // namespace shelving::cli
