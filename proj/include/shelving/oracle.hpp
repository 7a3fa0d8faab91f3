#pragma once

#include "shelving/emission_record.hpp"
#include "shelving/level_scheme.hpp"

#include <cstdint>
#include <memory>
#include <string>

namespace shelving {

/// Telegraph rates: strong density ~ exp(-beta1 t / 2) and exp(-lambda2 t).
struct TelegraphParams {
    double beta1 = 0;
    double lambda2 = 0;
    double weight = 0;  // probability mass of the fast component
};

struct OracleReport {
    TelegraphParams params;
    double fast_rate = 0;       // beta1 / 2
    double slow_amplitude = 0;  // coefficient A of A exp(-lambda2 t) in the strong density
    double weak_tail_rate = 0;  // asymptotic decay rate of the next-weak-photon density
    double fast_window[2] = {0, 0};
    double slow_window[2] = {0, 0};
};

/// Next-photon densities of the standard three-level V atom, computed by
/// propagating the conditional density matrix (photons of the other channel
/// keep resetting the atom to a0) with exact matrix exponentials.
class WaitingDensity {
public:
    WaitingDensity(const LevelScheme& scheme, Channel channel);
    double operator()(double t) const;
    /// Probability mass on [0, t].
    double mass(double t) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

/// Brute-force oracle for V schemes; throws ConfigError for other
/// configurations and NumericError when the rates cannot be separated.
OracleReport telegraph_report(const LevelScheme& scheme);
TelegraphParams telegraph_oracle(const LevelScheme& scheme);

std::string oracle_json(const LevelScheme& scheme, const OracleReport& report);
void write_oracle_json(const std::string& path, const LevelScheme& scheme, const OracleReport& report);
/// Reads beta1, lambda2, weight (and the extra fields when present).
OracleReport read_oracle_json(const std::string& path);
std::string oracle_file_name(const LevelScheme& scheme);

/// Standard Monte-Carlo wave-function trajectory: no-jump evolution under
/// the non-Hermitian Hamiltonian, jump when the norm drops below a uniform
/// draw. Laser reservoirs are treated as unlimited.
EmissionRecord mcwf_baseline(const LevelScheme& scheme, double t_max, std::uint64_t seed,
                             std::uint64_t trajectory = 0);

Ensemble mcwf_ensemble(const LevelScheme& scheme, double t_max, std::size_t n_trajectories, std::uint64_t seed);
Ensemble mcwf_ensemble_serial(const LevelScheme& scheme, double t_max, std::size_t n_trajectories,
                              std::uint64_t seed);

}  // namespace shelving
