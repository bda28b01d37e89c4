#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "slewsim/apf_guidance.hpp"
#include "slewsim/math.hpp"
#include "slewsim/rigid_body.hpp"
#include "slewsim/rw_cluster.hpp"
#include "slewsim/smc_control.hpp"

namespace slewsim {

// Full description of one closed-loop run. Everything the simulation needs
// is materialized here so a run is a pure function of its config.
struct ScenarioConfig {
    // [inertia]
    Mat3 I_star;
    double uncertainty_fraction = 0.2;  // delta bound = fraction * |I*|
    Mat3 I_actual;                      // plant inertia (defaults to nominal)

    // [cluster]
    double alpha = 0;      // rad
    double beta = 0;       // rad
    double tau_w_max = 0;  // N m
    double h_w_max = 0;    // N m s

    // [disturbance]
    DisturbanceModel disturbance;

    // [zones] + [zone.N]
    bool zones_enabled = true;
    std::vector<ForbiddenZone> zones;

    // [initial] / [target]
    Quaternion q0;
    Vec3 omega0;
    Quaternion q_d;
    Vec3 m_hat_body{1, 0, 0};

    // [controller]
    double lambda = 0;
    double k = 0;
    double sigma_bar = 0;
    double gamma = 0;  // explicit SMC gain; 0 requests closed-form synthesis

    // [rates]
    double plant_dt = 0.01;   // s
    double smc_period = 0.05; // s
    double apf_period = 1.0;  // s

    // [run]
    double duration = 0;  // s
    std::uint64_t seed = 0;
    bool enforce_initial_margin = true;

    void validate() const;  // throws ConfigError
};

// Gains and capability figures derived from a config.
struct DerivedParams {
    InertiaModel inertia;
    RwCluster cluster;
    double H_bar = 0;
    double tau_bar = 0;
    double omega_bar = 0;
    ApfParams apf;
    SmcParams smc;
    GainReport gains;
    bool gamma_synthesized = false;
};

DerivedParams derive_params(const ScenarioConfig& cfg);

// Bundled reference scenario (the DEMETER-class microsatellite profile).
std::string default_profile_text();

// INI-style parser: [section] headers, key = value lines, '#'/';' comments.
// Unknown sections or keys are rejected with the offending name. Overrides
// are dotted "section.key=value" pairs applied before interpretation.
ScenarioConfig load_config_text(const std::string& text,
                                const std::vector<std::pair<std::string, std::string>>& overrides = {});

// Reads a file, or the embedded profile when path is "default".
ScenarioConfig load_config_file(const std::string& path,
                                const std::vector<std::pair<std::string, std::string>>& overrides = {});

// Parses "section.key=value" as used by the CLI --set flag.
std::pair<std::string, std::string> parse_override(const std::string& spec);

}  // namespace slewsim
