#include "shelving/ensemble.hpp"

#include <algorithm>
#include <exception>
#include <vector>

namespace shelving {

namespace {

EnsembleResult merge(std::vector<TrajectoryResult>&& parts, double t_max) {
    EnsembleResult out;
    out.ensemble.t_max = t_max;
    out.ensemble.trajectories.reserve(parts.size());
    for (auto& p : parts) {
        out.stats.steps += p.stats.steps;
        out.stats.rejected_steps += p.stats.rejected_steps;
        out.stats.collapses += p.stats.collapses;
        out.stats.max_norm_drift = std::max(out.stats.max_norm_drift, p.stats.max_norm_drift);
        out.stats.max_launch_norm_error = std::max(out.stats.max_launch_norm_error, p.stats.max_launch_norm_error);
        out.ensemble.trajectories.push_back(std::move(p.record));
    }
    return out;
}

}  // namespace

EnsembleResult run_ensemble(const ModelProgram& program, double t_max, std::size_t n, std::uint64_t seed,
                            const EngineOptions& options) {
    std::vector<TrajectoryResult> parts(n);
    std::exception_ptr failure;
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) {
        try {
            parts[i] = run_trajectory(program, t_max, seed, static_cast<std::uint64_t>(i), options);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return merge(std::move(parts), t_max);
}

EnsembleResult run_ensemble_serial(const ModelProgram& program, double t_max, std::size_t n, std::uint64_t seed,
                                   const EngineOptions& options) {
    std::vector<TrajectoryResult> parts(n);
    for (std::size_t i = 0; i < n; ++i) parts[i] = run_trajectory(program, t_max, seed, i, options);
    return merge(std::move(parts), t_max);
}

}  // namespace shelving
