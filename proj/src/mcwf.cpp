#include "shelving/error.hpp"
#include "shelving/oracle.hpp"
#include "shelving/rng.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <vector>

namespace shelving {

namespace {

using Mat3 = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3cd;

struct Transition {
    Channel channel;
    int lower, upper;
    double omega, gamma;
};

// Level geometry of each configuration; index 0 is a0, 1 is a1, 2 is a2.
std::vector<Transition> transitions(const LevelScheme& s) {
    const auto strong = [&](int lo, int up) { return Transition{Channel::Strong, lo, up, s.omega_strong, s.gamma_strong}; };
    const auto weak = [&](int lo, int up) { return Transition{Channel::Weak, lo, up, s.omega_weak, s.gamma_weak}; };
    switch (s.config) {
        case ConfigurationKind::V: return {strong(0, 1), weak(0, 2)};
        case ConfigurationKind::Lambda: return {strong(1, 0), weak(2, 0)};
        case ConfigurationKind::CascadeUp: return {strong(0, 1), weak(2, 0)};
        case ConfigurationKind::CascadeDown: return {strong(1, 0), weak(0, 2)};
    }
    return {};
}

constexpr int kFinest = -34;  // time resolution base * 2^-34

class JumpSampler {
public:
    JumpSampler(const LevelScheme& s, double t_max) : legs_(transitions(s)) {
        const std::complex<double> I(0, 1);
        Mat3 h = Mat3::Zero();
        double scale = 0;
        for (const auto& l : legs_) {
            h(l.lower, l.upper) += 0.5 * l.omega;
            h(l.upper, l.lower) += 0.5 * l.omega;
            h(l.upper, l.upper) += -0.5 * I * l.gamma;
            scale = std::max({scale, l.omega, l.gamma});
        }
        base_ = scale > 0 ? 1.0 / scale : 1.0;
        int top = 0;
        while (base_ * std::ldexp(1.0, top) < t_max && top < 200) ++top;
        top_ = top;
        const Mat3 gen = -I * h;
        for (int k = kFinest; k <= top_; ++k) {
            if (k <= 0) ladder_.push_back((gen * std::ldexp(base_, k)).exp());
            else ladder_.push_back(ladder_.back() * ladder_.back());
        }
        start_ = legs_.front().lower;
    }

    int start_level() const { return start_; }

    /// Time after `now` at which the no-jump norm falls to `r`, or nullopt if
    /// that happens after t_max. `psi` is advanced to the jump.
    std::optional<double> next_jump(Vec3& psi, double now, double t_max, double r) const {
        double t = 0;
        int k = 0;
        // Gallop up while the norm stays above r, then bisect down the ladder.
        for (;; ++k) {
            if (k > top_ || !try_advance(psi, t, now, t_max, k, r)) break;
        }
        for (--k; k >= kFinest; --k) try_advance(psi, t, now, t_max, k, r);
        const double dt_min = std::ldexp(base_, kFinest);
        if (now + t + dt_min > t_max) return std::nullopt;
        return t + 0.5 * dt_min;
    }

    const std::vector<Transition>& legs() const { return legs_; }

private:
    bool try_advance(Vec3& psi, double& t, double now, double t_max, int k, double r) const {
        const double h = std::ldexp(base_, k);
        if (now + t + h > t_max) return false;
        const Vec3 next = ladder_[k - kFinest] * psi;
        if (next.squaredNorm() <= r) return false;
        psi = next;
        t += h;
        return true;
    }

    std::vector<Transition> legs_;
    std::vector<Mat3> ladder_;
    double base_ = 1;
    int top_ = 0;
    int start_ = 0;
};

EmissionRecord sample(const JumpSampler& sampler, double t_max, std::uint64_t seed, std::uint64_t trajectory) {
    EmissionRecord rec;
    if (!(t_max > 0)) return rec;
    TrajectoryRng rng(seed, trajectory);
    Vec3 psi = Vec3::Zero();
    psi(sampler.start_level()) = 1.0;
    double now = 0;
    while (true) {
        const auto u = rng.next();
        const auto wait = sampler.next_jump(psi, now, t_max, u.first);
        if (!wait) break;
        now += *wait;
        double total = 0;
        for (const auto& l : sampler.legs()) total += l.gamma * std::norm(psi(l.upper));
        if (!(total > 0)) throw NumericError("mcwf: jump with no decaying population at t=" + std::to_string(now));
        double target = u.second * total;
        const Transition* chosen = &sampler.legs().back();
        for (const auto& l : sampler.legs()) {
            target -= l.gamma * std::norm(psi(l.upper));
            if (target <= 0) {
                chosen = &l;
                break;
            }
        }
        rec.emissions.push_back({now, chosen->channel});
        psi = Vec3::Zero();
        psi(chosen->lower) = 1.0;
    }
    return rec;
}

}  // namespace

EmissionRecord mcwf_baseline(const LevelScheme& scheme, double t_max, std::uint64_t seed, std::uint64_t trajectory) {
    if (!(t_max > 0)) return {};
    return sample(JumpSampler(scheme, t_max), t_max, seed, trajectory);
}

Ensemble mcwf_ensemble(const LevelScheme& scheme, double t_max, std::size_t n, std::uint64_t seed) {
    Ensemble ens;
    ens.t_max = t_max;
    ens.trajectories.resize(n);
    if (!(t_max > 0)) return ens;
    const JumpSampler sampler(scheme, t_max);
    std::exception_ptr failure;
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) {
        try {
            ens.trajectories[i] = sample(sampler, t_max, seed, static_cast<std::uint64_t>(i));
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return ens;
}

Ensemble mcwf_ensemble_serial(const LevelScheme& scheme, double t_max, std::size_t n, std::uint64_t seed) {
    Ensemble ens;
    ens.t_max = t_max;
    ens.trajectories.resize(n);
    if (!(t_max > 0)) return ens;
    const JumpSampler sampler(scheme, t_max);
    for (std::size_t i = 0; i < n; ++i) ens.trajectories[i] = sample(sampler, t_max, seed, i);
    return ens;
}

}  // namespace shelving
