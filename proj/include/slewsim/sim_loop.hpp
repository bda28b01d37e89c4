#pragma once

#include <string>

#include "slewsim/config.hpp"
#include "slewsim/errors.hpp"
#include "slewsim/telemetry.hpp"

namespace slewsim {

// Module fault promoted to a run-level failure, stamped with sim time.
struct RunFault : SimError {
    RunFault(double t, const std::string& what)
        : SimError("t=" + std::to_string(t) + " s: " + what), time(t) {}
    double time = 0;
};

struct Metrics {
    double reaching_time = -1;         // first t with |sigma| <= sigma_bar
    double max_sigma_after_reach = 0;  // max |sigma| for t >= reaching_time
    double settling_time = -1;         // first t after which |e_eps| <= sigma_bar/lambda holds to the end
    std::array<double, 8> min_theta{}; // rad, per zone
    double min_theta_global = 0;       // rad (pi when no zones)
    double max_violation_depth = 0;    // rad, max over zones/time of floor - theta
    bool violated = false;
    // Smallest distance to the multi-zone interference floor: min over time
    // and zones of theta_j - theta_hat_j; nonnegative when the trajectory
    // honors the guaranteed bound even between interfering zones.
    double min_theta_hat_margin = 0;   // rad (pi when no zones)
    double max_abs_tau_w = 0;          // N m
    double max_abs_h_w = 0;            // N m s
    double steady_vec_error = 0;       // max |eps(conj(qd) x q)|_inf over the last 10%
    double steady_tracking_error = 0;  // same w.r.t. q*
    double final_eta_d = 0;            // scalar part of conj(qd) x q at the end
    double max_omega = 0;              // rad/s
    double max_omega_star = 0;         // rad/s
    bool omega_star_exceeded = false;
    bool torque_ever_saturated = false;
    bool momentum_ever_saturated = false;
    bool faulted = false;
    double fault_time = -1;
    std::string fault_message;
};

struct RunResult {
    TelemetryLog log;
    Metrics metrics;
    DerivedParams derived;
};

// Multi-rate closed loop: plant integrated at plant_dt with zero-order-hold
// inputs, SMC refreshed every smc_period, guidance every apf_period. Within
// a coincident tick the order is guidance, control, allocation, wheel step,
// plant step. Throws RunFault on module faults.
RunResult run_scenario(const ScenarioConfig& cfg);

// Variant that catches module faults into metrics instead of throwing
// (campaign workers use this).
RunResult run_scenario_collecting(const ScenarioConfig& cfg);

}  // namespace slewsim
