#include "shelving/error.hpp"
#include "shelving/oracle.hpp"

#include <Eigen/Dense>
#include <doctest.h>

#include <filesystem>

using namespace shelving;

namespace {

// Decay rates of |amplitude|^2 for the no-jump evolution of the V atom,
// from the eigenvalues of the 3x3 effective Hamiltonian, sorted ascending.
std::vector<double> no_jump_rates(const LevelScheme& s) {
    using C = std::complex<double>;
    Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
    h(0, 1) = h(1, 0) = 0.5 * s.omega_strong;
    h(0, 2) = h(2, 0) = 0.5 * s.omega_weak;
    h(1, 1) = C(0, -0.5 * s.gamma_strong);
    h(2, 2) = C(0, -0.5 * s.gamma_weak);
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(h);
    std::vector<double> out;
    for (int i = 0; i < 3; ++i) out.push_back(-2.0 * es.eigenvalues()(i).imag());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("desk-scale golden values") {
    const auto r = telegraph_report(desk_scale_scheme());
    // Frozen from this oracle; cross-checked against an independent
    // eigen-decomposition below.
    CHECK(r.params.lambda2 == doctest::Approx(0.0050440889).epsilon(1e-7));
    CHECK(r.params.beta1 == doctest::Approx(0.2004686).epsilon(1e-5));
    CHECK(r.fast_rate == doctest::Approx(r.params.beta1 / 2));
    CHECK(r.params.weight == doctest::Approx(0.99941).epsilon(1e-4));
    CHECK(r.params.beta1 / 2 > r.params.lambda2);
    CHECK(r.params.lambda2 > 0);
    CHECK((r.params.weight >= 0 && r.params.weight <= 1));

    const auto rates = no_jump_rates(desk_scale_scheme());
    CHECK(r.params.lambda2 == doctest::Approx(rates[0]).epsilon(1e-4));
    CHECK(r.fast_rate == doctest::Approx(rates[1]).epsilon(5e-3));
    CHECK(rates[1] == doctest::Approx(0.09995).epsilon(1e-4));
}

TEST_CASE("doubling gamma_weak roughly doubles lambda2") {
    auto s = desk_scale_scheme();
    const double a = telegraph_oracle(s).lambda2;
    s.gamma_weak *= 2;
    const double b = telegraph_oracle(s).lambda2;
    CHECK(b / a >= 1.8);
    CHECK(b / a <= 2.2);
}

TEST_CASE("lambda2 vanishes as the shelf becomes stable") {
    auto s = desk_scale_scheme();
    s.gamma_weak = 1e-9;
    s.omega_weak = 1e-4;
    const auto p = telegraph_oracle(s);
    CHECK(p.lambda2 < 1e-6);
    CHECK(p.lambda2 > 0);
    CHECK(p.beta1 / 2 == doctest::Approx(0.1).epsilon(1e-3));
}

TEST_CASE("waiting density is a probability density") {
    const WaitingDensity strong(desk_scale_scheme(), Channel::Strong);
    CHECK(strong(0.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(strong(5.0) > 0);
    CHECK(strong.mass(1e5) == doctest::Approx(1.0).epsilon(1e-6));
    const WaitingDensity weak(desk_scale_scheme(), Channel::Weak);
    CHECK(strong.mass(1e7) + weak.mass(1e7) > 1.0);  // both channels reset on either photon
}

TEST_CASE("oracle errors") {
    CHECK_THROWS_AS(telegraph_oracle(desk_scale_scheme(ConfigurationKind::Lambda)), ConfigError);
    auto s = desk_scale_scheme();
    s.gamma_weak = 0.5;
    s.omega_weak = 0.3;
    CHECK_THROWS_AS(telegraph_oracle(s), NumericError);
}

TEST_CASE("oracle JSON round trip") {
    const auto s = desk_scale_scheme();
    const auto r = telegraph_report(s);
    const auto dir = std::filesystem::temp_directory_path() / "shelving_oracle_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / oracle_file_name(s)).string();
    CHECK(oracle_file_name(s) == "oracle_" + scheme_hash(s) + ".json");
    write_oracle_json(path, s, r);
    const auto back = read_oracle_json(path);
    CHECK(back.params.beta1 == r.params.beta1);
    CHECK(back.params.lambda2 == r.params.lambda2);
    CHECK(back.params.weight == r.params.weight);
    CHECK_THROWS_AS(read_oracle_json((dir / "missing.json").string()), AnalysisError);
}

TEST_CASE("mcwf: no decay means no photons") {
    auto s = desk_scale_scheme();
    s.gamma_strong = 0;
    s.gamma_weak = 0;
    CHECK(mcwf_baseline(s, 1e4, 1).empty());
}

TEST_CASE("mcwf: deterministic, valid, and independent of thread count") {
    auto s = desk_scale_scheme();
    const auto a = mcwf_baseline(s, 2e4, 5, 2);
    const auto b = mcwf_baseline(s, 2e4, 5, 2);
    CHECK(a == b);
    CHECK(a.is_valid());
    CHECK(a.count(Channel::Strong) > 500);
    CHECK(mcwf_baseline(s, 0.0, 5).empty());
    CHECK(mcwf_ensemble(s, 5e3, 5, 9) == mcwf_ensemble_serial(s, 5e3, 5, 9));
    CHECK(mcwf_ensemble(s, 5e3, 5, 9).trajectories[3] == mcwf_baseline(s, 5e3, 9, 3));
    for (auto kind : {ConfigurationKind::Lambda, ConfigurationKind::CascadeUp, ConfigurationKind::CascadeDown}) {
        const auto r = mcwf_baseline(desk_scale_scheme(kind), 2e4, 5);
        CHECK(r.is_valid());
        // CascadeUp at desk scale sits dark on a2 almost at once: the strong
        // drive splits a0 and the weak repump is off resonance
        CHECK_FALSE(r.empty());
    }
}

TEST_CASE("mcwf bright-state photon rate matches the two-level steady state") {
    auto s = desk_scale_scheme();
    s.omega_weak = 1e-9;
    const double t_max = 2e5;
    const auto r = mcwf_baseline(s, t_max, 3);
    // Gamma * Omega^2/4 / (Gamma^2/4 + Omega^2/2)
    const double w = s.omega_strong * s.omega_strong;
    const double expected = s.gamma_strong * (w / 4) / (s.gamma_strong * s.gamma_strong / 4 + w / 2);
    CHECK(r.count(Channel::Strong) / t_max == doctest::Approx(expected).epsilon(0.02));
}

}
