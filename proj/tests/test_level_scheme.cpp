#include "shelving/error.hpp"
#include "shelving/level_scheme.hpp"
#include "shelving/rng.hpp"

#include <doctest.h>

#include <random>

using namespace shelving;

namespace {

SchemeConfig desk_config() {
    return {{"configuration", "V"},        {"gamma_strong", "1"},      {"gamma_weak", "0.005"},
            {"omega_strong", "0.3"},       {"omega_weak", "0.002"},    {"n_strong_photons", "1000000"},
            {"n_weak_photons", "1000000"}};
}

std::string rejected_field(SchemeConfig raw) {
    try {
        build_scheme(raw);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

}  // namespace

TEST_SUITE("level_scheme") {

TEST_CASE("lifetimes of 1e-8 s and 2 s become accepted rates") {
    auto raw = desk_config();
    raw["gamma_strong"] = std::to_string(rate_from_lifetime(1e-8));
    raw["gamma_weak"] = std::to_string(rate_from_lifetime(2.0));
    raw["omega_strong"] = "1e7";
    raw["omega_weak"] = "0.1";
    const auto s = build_scheme(raw);
    CHECK(s.gamma_strong == doctest::Approx(1e8));
    CHECK(s.gamma_weak == doctest::Approx(0.5));
}

TEST_CASE("equal decay rates are rejected") {
    auto raw = desk_config();
    raw["gamma_weak"] = "1";
    CHECK_THROWS_WITH_AS(build_scheme(raw), doctest::Contains("weak decay must be slower"), ConfigError);
    CHECK(rejected_field(raw) == "gamma_weak");
}

TEST_CASE("desk-scale scheme is accepted and matches the built-in default") {
    const auto s = build_scheme(desk_config());
    CHECK(s == desk_scale_scheme());
    CHECK(s.rabi_onset == RabiOnset::Delayed);
    CHECK_FALSE(s.stimulated_emission);
}

TEST_CASE("each invalid field is named") {
    for (const char* key : {"gamma_strong", "gamma_weak", "omega_strong", "omega_weak"}) {
        auto raw = desk_config();
        raw[key] = "0";
        CHECK(rejected_field(raw) == key);
        raw[key] = "-1";
        CHECK(rejected_field(raw) == key);
        raw[key] = "abc";
        CHECK(rejected_field(raw) == key);
    }
    for (const char* key : {"n_strong_photons", "n_weak_photons"}) {
        auto raw = desk_config();
        raw[key] = "0";
        CHECK(rejected_field(raw) == key);
    }
    auto raw = desk_config();
    raw.erase("omega_weak");
    CHECK(rejected_field(raw) == "omega_weak");
    raw = desk_config();
    raw["colour"] = "blue";
    CHECK(rejected_field(raw) == "colour");
    raw = desk_config();
    raw["configuration"] = "W";
    CHECK(rejected_field(raw) == "configuration");
    raw = desk_config();
    raw["rabi_onset"] = "soon";
    CHECK(rejected_field(raw) == "rabi_onset");
}

TEST_CASE("configuration names and aliases") {
    CHECK(parse_configuration("Lambda") == ConfigurationKind::Lambda);
    CHECK(parse_configuration("CascadeE1aboveE0") == ConfigurationKind::CascadeUp);
    CHECK(parse_configuration("CascadeE1belowE0") == ConfigurationKind::CascadeDown);
    CHECK(parse_configuration("CascadeDown") == ConfigurationKind::CascadeDown);
}

TEST_CASE("config text parsing skips comments and sections") {
    const auto raw = parse_config_text("[scheme]\n# comment\nconfiguration = Lambda  # trailing\n\n gamma_strong=2\n");
    CHECK(raw.at("configuration") == "Lambda");
    CHECK(raw.at("gamma_strong") == "2");
    CHECK_THROWS_AS(parse_config_text("no equals sign here\n"), ConfigError);
}

TEST_CASE("property: build is idempotent through serialize and every accepted scheme is valid") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> logu(-4, 4);
    const char* kinds[] = {"V", "Lambda", "CascadeUp", "CascadeDown"};
    int accepted = 0;
    for (int i = 0; i < 500; ++i) {
        SchemeConfig raw{{"configuration", kinds[i % 4]},
                         {"gamma_strong", std::to_string(std::pow(10.0, logu(gen)))},
                         {"gamma_weak", std::to_string(std::pow(10.0, logu(gen)))},
                         {"omega_strong", std::to_string(std::pow(10.0, logu(gen)))},
                         {"omega_weak", std::to_string(std::pow(10.0, logu(gen)))},
                         {"n_strong_photons", std::to_string(1 + gen() % 1000)},
                         {"n_weak_photons", std::to_string(1 + gen() % 1000)},
                         {"rabi_onset", i % 3 ? "delayed" : "immediate"},
                         {"stimulated_emission", i % 2 ? "on" : "off"}};
        LevelScheme s;
        try {
            s = build_scheme(raw);
        } catch (const ConfigError&) {
            continue;
        }
        ++accepted;
        CHECK(s.gamma_strong > s.gamma_weak);
        CHECK(s.gamma_weak > 0);
        CHECK(s.omega_strong > 0);
        CHECK(s.omega_weak > 0);
        CHECK(s.n_strong_photons >= 1);
        CHECK(s.n_weak_photons >= 1);
        const auto again = build_scheme(parse_config_text(serialize(s)));
        CHECK(again == s);
        CHECK(scheme_hash(again) == scheme_hash(s));
    }
    CHECK(accepted > 100);
}

TEST_CASE("scheme hash is stable and sensitive") {
    const auto a = desk_scale_scheme();
    auto b = a;
    b.omega_weak *= 2;
    CHECK(scheme_hash(a).size() == 16);
    CHECK(scheme_hash(a) == scheme_hash(desk_scale_scheme()));
    CHECK(scheme_hash(a) != scheme_hash(b));
}

TEST_CASE("philox known answers") {
    // Random123 reference vectors for philox4x32-10.
    CHECK(Philox4x32::generate({0, 0, 0, 0}, {0, 0}) ==
          Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("trajectory streams are deterministic, distinct and uniform") {
    TrajectoryRng a(42, 0), b(42, 0), c(42, 1);
    CHECK(a.draw(5, 0).first == b.draw(5, 0).first);
    CHECK(a.draw(5, 0).first != c.draw(5, 0).first);
    CHECK(a.draw(5, 0).first != a.draw(6, 0).first);
    double sum = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const auto p = a.next();
        CHECK((p.first > 0 && p.first < 1));
        sum += p.first + p.second;
    }
    CHECK(sum / (2 * n) == doctest::Approx(0.5).epsilon(0.005));
}

}
