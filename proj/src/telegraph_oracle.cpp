#include "shelving/error.hpp"
#include "shelving/oracle.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

namespace shelving {

using Mat3 = Eigen::Matrix3cd;
using Mat9 = Eigen::Matrix<std::complex<double>, 9, 9>;
using Vec9 = Eigen::Matrix<std::complex<double>, 9, 1>;

struct WaitingDensity::Impl {
    Mat9 generator;
    Vec9 start;
    int observed = 0;  // flattened index of the emitting level's population
    double rate = 0;
};

namespace {

constexpr int at(int i, int j) { return 3 * i + j; }

void require_v(const LevelScheme& scheme) {
    if (scheme.config != ConfigurationKind::V)
        throw ConfigError("configuration", "the telegraph oracle is defined for the V configuration");
}

}  // namespace

// Levels: 0 ground, 1 strong excited, 2 weak excited. The density of the next
// `channel` photon evolves under the non-Hermitian Hamiltonian with the
// other channel's jumps put back into the ground state.
WaitingDensity::WaitingDensity(const LevelScheme& s, Channel channel) {
    require_v(s);
    const std::complex<double> I(0, 1);
    Mat3 h = Mat3::Zero();
    h(0, 1) = h(1, 0) = 0.5 * s.omega_strong;
    h(0, 2) = h(2, 0) = 0.5 * s.omega_weak;
    h(1, 1) = -0.5 * I * s.gamma_strong;
    h(2, 2) = -0.5 * I * s.gamma_weak;

    auto impl = std::make_shared<Impl>();
    Mat9 L = Mat9::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                L(at(i, j), at(k, j)) += -I * h(i, k);
                L(at(i, j), at(i, k)) += I * std::conj(h(j, k));
            }
    if (channel == Channel::Strong) {
        L(at(0, 0), at(2, 2)) += s.gamma_weak;
        impl->observed = at(1, 1);
        impl->rate = s.gamma_strong;
    } else {
        L(at(0, 0), at(1, 1)) += s.gamma_strong;
        impl->observed = at(2, 2);
        impl->rate = s.gamma_weak;
    }
    impl->generator = L;
    impl->start = Vec9::Zero();
    impl->start(at(0, 0)) = 1.0;
    impl_ = std::move(impl);
}

double WaitingDensity::operator()(double t) const {
    const Mat9 p = (impl_->generator * t).exp();
    return impl_->rate * (p.row(impl_->observed) * impl_->start)(0).real();
}

double WaitingDensity::mass(double t) const {
    const Vec9 rho = (impl_->generator * t).exp() * impl_->start;
    return 1.0 - (rho(at(0, 0)) + rho(at(1, 1)) + rho(at(2, 2))).real();
}

namespace {

struct LineFit {
    double slope = 0, intercept = 0;
    bool ok = false;
};

template <class F>
LineFit fit_log(const F& f, double a, double b) {
    constexpr int n = 64;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double t = a + (b - a) * i / (n - 1);
        const double v = f(t);
        if (!(v > 0) || !std::isfinite(v)) return {};
        const double y = std::log(v);
        sx += t, sy += y, sxx += t * t, sxy += t * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, (sy - slope * sx) / n, true};
}

struct Tail {
    double rate = 0, amplitude = 0, from = 0, to = 0;
};

// Asymptotic exponential: log-linear fits over doubling windows, keeping the
// last window before the density underflows to 1e-100 of its early peak.
Tail asymptotic_tail(const WaitingDensity& w, double t0) {
    double peak = 0;
    for (int i = 1; i <= 200; ++i) peak = std::max(peak, w(t0 * 0.1 * i));
    Tail tail;
    for (double t = t0; t < 1e300; t *= 2) {
        const auto fit = fit_log(w, t, 2 * t);
        if (!fit.ok || w(2 * t) < 1e-100 * peak) break;
        tail = {-fit.slope, std::exp(fit.intercept), t, 2 * t};
    }
    if (!(tail.rate > 0)) throw NumericError("oracle: no decaying tail found; the density does not decay");
    return tail;
}

}  // namespace

OracleReport telegraph_report(const LevelScheme& s) {
    require_v(s);
    const WaitingDensity strong(s, Channel::Strong);
    const double t0 = 1.0 / s.gamma_strong;
    const auto slow = asymptotic_tail(strong, t0);

    // Fast component from the slow-subtracted remainder on [5/beta1, 10/beta1],
    // iterated because the window depends on the rate it measures.
    auto remainder = [&](double t) { return strong(t) - slow.amplitude * std::exp(-slow.rate * t); };
    double fast = 0.5 * s.gamma_strong;
    double window[2] = {0, 0};
    for (int it = 0; it < 100; ++it) {
        window[0] = 2.5 / fast;
        window[1] = 5.0 / fast;
        const auto fit = fit_log(remainder, window[0], window[1]);
        if (!fit.ok || !(-fit.slope > 0))
            throw NumericError("oracle: fast and slow components are not separable; increase the rate separation");
        const double next = -fit.slope;
        const bool done = std::abs(next - fast) < 1e-12 * fast;
        fast = next;
        if (done) break;
    }
    if (!(fast > 2 * slow.rate))
        throw NumericError("oracle: rates indistinguishable (fast " + std::to_string(fast) + ", slow " +
                           std::to_string(slow.rate) + "); increase the rate separation");

    OracleReport rep;
    rep.fast_rate = fast;
    rep.params.beta1 = 2 * fast;
    rep.params.lambda2 = slow.rate;
    rep.params.weight = std::clamp(1.0 - slow.amplitude / slow.rate, 0.0, 1.0);
    rep.slow_amplitude = slow.amplitude;
    rep.fast_window[0] = window[0];
    rep.fast_window[1] = window[1];
    rep.slow_window[0] = slow.from;
    rep.slow_window[1] = slow.to;
    rep.weak_tail_rate = asymptotic_tail(WaitingDensity(s, Channel::Weak), t0).rate;
    return rep;
}

TelegraphParams telegraph_oracle(const LevelScheme& scheme) { return telegraph_report(scheme).params; }

std::string oracle_file_name(const LevelScheme& scheme) { return "oracle_" + scheme_hash(scheme) + ".json"; }

std::string oracle_json(const LevelScheme& scheme, const OracleReport& r) {
    nlohmann::ordered_json j;
    j["beta1"] = r.params.beta1;
    j["lambda2"] = r.params.lambda2;
    j["weight"] = r.params.weight;
    j["fast_rate"] = r.fast_rate;
    j["mean_dark_duration"] = 1.0 / r.params.lambda2;
    j["slow_amplitude"] = r.slow_amplitude;
    j["weak_tail_rate"] = r.weak_tail_rate;
    j["fast_window"] = {r.fast_window[0], r.fast_window[1]};
    j["slow_window"] = {r.slow_window[0], r.slow_window[1]};
    j["scheme_hash"] = scheme_hash(scheme);
    j["si"] = {{"beta1_per_second", r.params.beta1 / scheme.time_unit_seconds},
               {"lambda2_per_second", r.params.lambda2 / scheme.time_unit_seconds}};
    return j.dump(2) + "\n";
}

void write_oracle_json(const std::string& path, const LevelScheme& scheme, const OracleReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << oracle_json(scheme, report);
}

OracleReport read_oracle_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw AnalysisError("cannot open oracle file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
        OracleReport r;
        r.params.beta1 = j.at("beta1").get<double>();
        r.params.lambda2 = j.at("lambda2").get<double>();
        r.params.weight = j.at("weight").get<double>();
        r.fast_rate = j.value("fast_rate", r.params.beta1 / 2);
        r.slow_amplitude = j.value("slow_amplitude", 0.0);
        r.weak_tail_rate = j.value("weak_tail_rate", 0.0);
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw AnalysisError("oracle file '" + path + "': " + e.what());
    }
}

}  // namespace shelving
