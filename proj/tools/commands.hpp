#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace shelving::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericFailure = 3, kAnalysisFailure = 4 };

struct RunManifest {
    std::string scheme_path;
    std::size_t n_trajectories = 1;
    double t_max = 0;
    std::uint64_t base_seed = 0;
    std::string engine = "nrules";
    std::string output_dir = ".";
};

/// Applies `key = value` pairs from a run config file onto `manifest`.
void apply_run_config(RunManifest& manifest, const std::string& path);
void validate(const RunManifest& manifest);

void cmd_run(const RunManifest& manifest, std::ostream& log);
void cmd_oracle(const std::string& scheme_path, const std::string& output_dir, std::ostream& log);

struct AnalyzeOptions {
    std::string emissions_path;
    std::string oracle_path;    // optional
    std::string manifest_path;  // default: manifest.json next to the emissions
    std::string output_dir = ".";
    double gap_threshold = 0;
    std::optional<double> fit_t_min;
    bool strict = false;  // failing checks give exit code 4
};

/// Returns true when every check in the report passed.
bool cmd_analyze(const AnalyzeOptions& options, std::ostream& log);

}  // namespace shelving::cli
