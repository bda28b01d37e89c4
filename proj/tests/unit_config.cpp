#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "slewsim/config.hpp"
#include "slewsim/errors.hpp"

using namespace slewsim;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDeg = kPi / 180.0;
}

TEST_CASE("default profile loads and derives the reference figures") {
    const ScenarioConfig cfg = load_config_text(default_profile_text());
    CHECK(cfg.zones.size() == 3);
    CHECK(cfg.zones_enabled);
    CHECK(cfg.alpha == doctest::Approx(45.0 * kDeg));
    CHECK(cfg.gamma == doctest::Approx(2e-4));
    CHECK(cfg.q0.eta == doctest::Approx(-0.306).epsilon(1e-3));
    CHECK(std::fabs(cfg.q0.norm() - 1.0) < 1e-12);

    const DerivedParams d = derive_params(cfg);
    CHECK(d.H_bar == doctest::Approx(0.1968).epsilon(0.01));
    CHECK(d.tau_bar == doctest::Approx(8.2e-3).epsilon(0.02));
    CHECK(d.omega_bar == doctest::Approx(3.7e-3).epsilon(0.20));
    CHECK(d.smc.gamma == doctest::Approx(2e-4));
    CHECK(!d.gamma_synthesized);
    CHECK(d.apf.alpha2 == doctest::Approx(0.5 * d.omega_bar));
}

TEST_CASE("unknown keys are rejected by name") {
    const std::string text = default_profile_text() + "\n[cluster]\nspin_axis = 3\n";
    try {
        load_config_text(text);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("cluster.spin_axis") != std::string::npos);
    }
}

TEST_CASE("overrides apply and bad overrides are rejected") {
    const ScenarioConfig cfg = load_config_text(
        default_profile_text(),
        {{"run.duration", "100"}, {"controller.gamma", "1e-4"}, {"zones.enabled", "false"}});
    CHECK(cfg.duration == doctest::Approx(100.0));
    CHECK(cfg.gamma == doctest::Approx(1e-4));
    CHECK(!cfg.zones_enabled);

    CHECK_THROWS_AS(load_config_text(default_profile_text(), {{"nodots", "1"}}),
                    ConfigError);
    CHECK_THROWS_AS(load_config_text(default_profile_text(), {{"run.bogus", "1"}}),
                    ConfigError);

    const auto kv = parse_override("controller.gamma=5e-5");
    CHECK(kv.first == "controller.gamma");
    CHECK(kv.second == "5e-5");
    CHECK_THROWS_AS(parse_override("no-equals"), ConfigError);
}

TEST_CASE("rate multiples and malformed input are validated") {
    CHECK_THROWS_AS(
        load_config_text(default_profile_text(), {{"rates.smc_period", "0.013"}}),
        ConfigError);
    CHECK_THROWS_AS(
        load_config_text(default_profile_text(), {{"run.duration", "-5"}}),
        ConfigError);
    CHECK_THROWS_AS(load_config_text("[inertia]\nnominal = 1, 2\n"), ConfigError);
    CHECK_THROWS_AS(load_config_text("key_without_section = 1\n"), ConfigError);
    CHECK_THROWS_AS(load_config_text("[inertia\nnominal = 1\n"), ConfigError);
}

TEST_CASE("initial attitude inside a zone is rejected unless overridden") {
    // Zone centered on the initial boresight direction.
    const ScenarioConfig base = load_config_text(default_profile_text());
    const Vec3 m0 = rotation_matrix(base.q0).transpose() * base.m_hat_body;
    char axis[128];
    std::snprintf(axis, sizeof axis, "%.17g,%.17g,%.17g", m0.x, m0.y, m0.z);

    CHECK_THROWS_AS(
        load_config_text(default_profile_text(), {{"zone.1.axis", axis}}),
        ConfigError);
    const ScenarioConfig forced = load_config_text(
        default_profile_text(),
        {{"zone.1.axis", axis}, {"run.enforce_initial_margin", "false"}});
    CHECK(forced.zones.size() == 3);
}

TEST_CASE("gamma = 0 requests synthesis, which reports infeasibility here") {
    CHECK_THROWS_AS(
        derive_params(load_config_text(default_profile_text(), {{"controller.gamma", "0"}})),
        InfeasibleTorque);
}

TEST_CASE("explicit actual inertia is honored and bounded") {
    const ScenarioConfig cfg = load_config_text(
        default_profile_text(),
        {{"inertia.actual", "33, -3.3, 0, -3.3, 27, -1.8, 0, -1.8, 44"}});
    const DerivedParams d = derive_params(cfg);
    CHECK(d.inertia.I_true(0, 0) == doctest::Approx(33.0));

    CHECK_THROWS_AS(
        derive_params(load_config_text(
            default_profile_text(),
            {{"inertia.actual", "60, -3, 0, -3, 30, -2, 0, -2, 40"}})),
        SimError);
}
