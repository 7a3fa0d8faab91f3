#include "commands.hpp"

#include "shelving/error.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace shelving;

int main(int argc, char** argv) {
    CLI::App app{"Shelving simulator: nRules trajectories, oracles and analysis"};
    app.require_subcommand(1);

    cli::RunManifest manifest;
    std::string run_config;
    auto* run = app.add_subcommand("run", "simulate an ensemble and write emissions.csv + manifest.json");
    run->add_option("--config", run_config, "run config file (key = value); flags override it");
    auto* scheme_opt = run->add_option("--scheme", manifest.scheme_path, "scheme file");
    auto* traj_opt = run->add_option("--trajectories", manifest.n_trajectories, "number of trajectories");
    auto* tmax_opt = run->add_option("--t-max", manifest.t_max, "trajectory length in scheme time units");
    auto* seed_opt = run->add_option("--seed", manifest.base_seed, "base seed");
    auto* engine_opt = run->add_option("--engine", manifest.engine, "nrules | mcwf");
    auto* out_opt = run->add_option("--out", manifest.output_dir, "output directory");

    std::string oracle_scheme, oracle_out = ".";
    auto* oracle = app.add_subcommand("oracle", "compute the telegraph oracle for a V scheme");
    oracle->add_option("--scheme", oracle_scheme, "scheme file")->required();
    oracle->add_option("--out", oracle_out, "output directory");

    cli::AnalyzeOptions analyze_opts;
    double fit_t_min = -1;
    auto* analyze = app.add_subcommand("analyze", "segment, fit and check an emissions file");
    analyze->add_option("--emissions", analyze_opts.emissions_path, "emissions.csv")->required();
    analyze->add_option("--oracle", analyze_opts.oracle_path, "oracle JSON");
    analyze->add_option("--manifest", analyze_opts.manifest_path, "manifest.json (default: next to emissions)");
    analyze->add_option("--out", analyze_opts.output_dir, "output directory");
    analyze->add_option("--gap-threshold", analyze_opts.gap_threshold, "dark-gap threshold (default 20/strong rate)");
    analyze->add_option("--fit-t-min", fit_t_min, "left truncation of the waiting-time fit");
    analyze->add_flag("--strict", analyze_opts.strict, "exit 4 when a check fails");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cli::kConfigError;
    }

    try {
        if (*run) {
            if (!run_config.empty()) {
                // File first, then any flag given on the command line wins.
                cli::RunManifest from_file;
                cli::apply_run_config(from_file, run_config);
                if (!*scheme_opt) manifest.scheme_path = from_file.scheme_path;
                if (!*traj_opt) manifest.n_trajectories = from_file.n_trajectories;
                if (!*tmax_opt) manifest.t_max = from_file.t_max;
                if (!*seed_opt) manifest.base_seed = from_file.base_seed;
                if (!*engine_opt) manifest.engine = from_file.engine;
                if (!*out_opt) manifest.output_dir = from_file.output_dir;
            }
            cli::cmd_run(manifest, std::cout);
        } else if (*oracle) {
            cli::cmd_oracle(oracle_scheme, oracle_out, std::cout);
        } else if (*analyze) {
            if (fit_t_min >= 0) analyze_opts.fit_t_min = fit_t_min;
            const bool passed = cli::cmd_analyze(analyze_opts, std::cout);
            if (analyze_opts.strict && !passed) return cli::kAnalysisFailure;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return cli::kConfigError;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return cli::kNumericFailure;
    } catch (const AnalysisError& e) {
        std::cerr << "analysis failure: " << e.what() << '\n';
        return cli::kAnalysisFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return cli::kOk;
}
