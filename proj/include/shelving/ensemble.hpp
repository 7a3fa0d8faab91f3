#pragma once

#include "shelving/atom_models.hpp"
#include "shelving/dynamics.hpp"
#include "shelving/emission_record.hpp"

#include <cstdint>

namespace shelving {

struct EnsembleStats {
    std::uint64_t steps = 0;
    std::uint64_t rejected_steps = 0;
    std::uint64_t collapses = 0;
    double max_norm_drift = 0;
    double max_launch_norm_error = 0;
};

struct EnsembleResult {
    Ensemble ensemble;
    EnsembleStats stats;
};

/// Trajectory i uses stream i of `seed`, so both runners give identical output.
EnsembleResult run_ensemble(const ModelProgram& program, double t_max, std::size_t n_trajectories,
                            std::uint64_t seed, const EngineOptions& options = {});

/// Serial reference for run_ensemble.
EnsembleResult run_ensemble_serial(const ModelProgram& program, double t_max, std::size_t n_trajectories,
                                   std::uint64_t seed, const EngineOptions& options = {});

}  // namespace shelving
