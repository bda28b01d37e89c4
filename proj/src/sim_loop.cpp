#include "slewsim/sim_loop.hpp"

#include <cmath>

namespace slewsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

Metrics compute_metrics(const TelemetryLog& log, const ScenarioConfig& cfg,
                        const DerivedParams& d) {
    Metrics m;
    const auto& recs = log.records;
    m.min_theta_global = kPi;
    m.min_theta_hat_margin = kPi;
    for (int j = 0; j < log.n_zones; ++j) m.min_theta[static_cast<std::size_t>(j)] = kPi;
    std::vector<double> thetas(static_cast<std::size_t>(log.n_zones));

    const double acc_bound = accuracy_bound(d.smc);
    double last_acc_violation = -1.0;
    bool reached = false;

    for (const TelemetryRecord& r : recs) {
        for (int j = 0; j < log.n_zones; ++j) {
            const double th = r.theta[static_cast<std::size_t>(j)];
            auto& slot = m.min_theta[static_cast<std::size_t>(j)];
            slot = std::fmin(slot, th);
            m.min_theta_global = std::fmin(m.min_theta_global, th);
            const double depth = cfg.zones[static_cast<std::size_t>(j)].theta_floor - th;
            if (depth > 1e-12) {
                m.violated = true;
                m.max_violation_depth = std::fmax(m.max_violation_depth, depth);
            }
        }
        if (log.n_zones > 0) {
            for (int j = 0; j < log.n_zones; ++j)
                thetas[static_cast<std::size_t>(j)] = r.theta[static_cast<std::size_t>(j)];
            for (int j = 0; j < log.n_zones; ++j) {
                const double hat = theta_hat(
                    thetas, cfg.zones[static_cast<std::size_t>(j)].theta_floor,
                    static_cast<std::size_t>(j));
                m.min_theta_hat_margin = std::fmin(
                    m.min_theta_hat_margin, thetas[static_cast<std::size_t>(j)] - hat);
            }
        }
        const double sn = r.sigma.norm();
        if (!reached && sn <= d.smc.sigma_bar) {
            reached = true;
            m.reaching_time = r.t;
        }
        if (reached) m.max_sigma_after_reach = std::fmax(m.max_sigma_after_reach, sn);

        const Quaternion e_star = quat_error(r.q_star, r.q);
        if (e_star.eps.norm() > acc_bound) last_acc_violation = r.t;

        m.max_abs_tau_w = std::fmax(m.max_abs_tau_w, r.tau_w.norm_inf());
        m.max_abs_h_w = std::fmax(m.max_abs_h_w, r.h_w.norm_inf());
        m.max_omega = std::fmax(m.max_omega, r.omega.norm());
        m.max_omega_star = std::fmax(m.max_omega_star, r.omega_star.norm());
        m.omega_star_exceeded |= r.omega_star_exceeded;
        m.torque_ever_saturated |= r.torque_saturated;
        m.momentum_ever_saturated |= r.momentum_saturated;
    }
    if (!recs.empty()) {
        m.settling_time = last_acc_violation < 0.0 ? recs.front().t
                                                   : last_acc_violation + log.dt;
        if (last_acc_violation >= recs.back().t) m.settling_time = -1.0;

        const double window_start = recs.back().t - 0.1 * (recs.back().t - recs.front().t);
        for (const TelemetryRecord& r : recs) {
            if (r.t < window_start) continue;
            const Quaternion e_d = quat_error(cfg.q_d, r.q);
            m.steady_vec_error = std::fmax(m.steady_vec_error, e_d.eps.norm_inf());
            const Quaternion e_s = quat_error(r.q_star, r.q);
            m.steady_tracking_error = std::fmax(m.steady_tracking_error, e_s.eps.norm_inf());
        }
        m.final_eta_d = quat_error(cfg.q_d, recs.back().q).eta;
    }
    return m;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    RunResult out{TelemetryLog{}, Metrics{}, derive_params(cfg)};
    const DerivedParams& d = out.derived;

    const std::vector<ForbiddenZone> active_zones =
        cfg.zones_enabled ? cfg.zones : std::vector<ForbiddenZone>{};

    const int n_steps = static_cast<int>(std::lround(cfg.duration / cfg.plant_dt));
    const int smc_every = static_cast<int>(std::lround(cfg.smc_period / cfg.plant_dt));
    const int apf_every = static_cast<int>(std::lround(cfg.apf_period / cfg.plant_dt));

    TelemetryLog& log = out.log;
    log.dt = cfg.plant_dt;
    log.n_zones = static_cast<int>(active_zones.size());
    log.sigma_bar = d.smc.sigma_bar;
    log.theta_floor = kPi;
    for (const ForbiddenZone& z : active_zones)
        log.theta_floor = std::fmin(log.theta_floor, z.theta_floor);
    log.records.reserve(static_cast<std::size_t>(n_steps) + 1);

    PlantState s{cfg.q0, cfg.omega0, 0.0};
    GuidanceState guidance{cfg.q0, {}};  // reference starts on the plant state
    WheelState wheels;
    Vec4 tau_w_cmd;
    ControlOutput held_ctrl;

    auto snapshot = [&](double t, const Vec4& tau_w_act, const Vec4& h_w_pre,
                        const WheelState& ws_flags) {
        TelemetryRecord r;
        r.t = t;
        r.q = s.q;
        r.omega = s.omega;
        r.q_star = guidance.q_star;
        r.omega_star = guidance.omega_star;
        const TrackingError te =
            tracking_error(s.q, s.omega, guidance.q_star, guidance.omega_star, d.smc);
        r.sigma = te.sigma;
        r.u = held_ctrl.u;
        r.tau_body = wheels_to_body(d.cluster, tau_w_act);
        r.tau_w = tau_w_act;
        r.h_w = h_w_pre;
        const auto margins = pointing_margins(s.q, cfg.m_hat_body, active_zones);
        for (std::size_t j = 0; j < margins.size(); ++j) r.theta[j] = margins[j].theta;
        r.torque_saturated = ws_flags.torque_saturated;
        r.momentum_saturated = ws_flags.momentum_saturated;
        r.sigma_exceeded = te.sigma.norm() > d.smc.sigma_bar;
        r.omega_star_exceeded = guidance.omega_star.norm() > d.omega_bar * (1.0 + 1e-12);
        log.records.push_back(r);
    };

    for (int k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * cfg.plant_dt;
        try {
            if (k % apf_every == 0) {
                // The reference is re-based on the measured attitude each
                // guidance tick and propagated with the held rate until the
                // next one; this keeps e_eta positive (no unwinding through
                // the error quaternion) and makes e_eps a pure tracking
                // error over the tick.
                guidance.q_star = s.q;
                guidance.omega_star =
                    reference_rate(s.q, cfg.q_d, cfg.m_hat_body, active_zones, d.apf);
            }
            if (k % smc_every == 0) {
                const TrackingError te = tracking_error(
                    s.q, s.omega, guidance.q_star, guidance.omega_star, d.smc);
                held_ctrl = control_input(te, d.smc, d.inertia.I_star);
                tau_w_cmd = allocate(d.cluster, held_ctrl.tau);
            }
        } catch (const SimError& e) {
            throw RunFault(t, e.what());
        }

        const Vec4 h_w_pre = wheels.h_w;
        const WheelStepResult wr = wheel_step(d.cluster, wheels, tau_w_cmd, cfg.plant_dt);

        snapshot(t, wr.tau_actual, h_w_pre, wr.state);

        PlantInputs in;
        in.tau = wheels_to_body(d.cluster, wr.tau_actual);
        in.h0 = wheels_to_body(d.cluster, h_w_pre);
        in.h_dot = wheels_to_body(d.cluster, wr.tau_actual) * -1.0;
        in.disturbance = &cfg.disturbance;
        s = rk4_step(s, cfg.plant_dt, in, d.inertia);
        guidance = propagate_reference(guidance, guidance.omega_star, cfg.plant_dt);
        wheels = wr.state;
    }
    // Final sample carries the state at t = duration with the last actuation.
    snapshot(cfg.duration, Vec4{}, wheels.h_w, wheels);

    out.metrics = compute_metrics(log, cfg, d);
    return out;
}

RunResult run_scenario_collecting(const ScenarioConfig& cfg) {
    try {
        return run_scenario(cfg);
    } catch (const RunFault& f) {
        RunResult out;
        out.metrics.faulted = true;
        out.metrics.fault_time = f.time;
        out.metrics.fault_message = f.what();
        return out;
    } catch (const SimError& e) {
        RunResult out;
        out.metrics.faulted = true;
        out.metrics.fault_message = e.what();
        return out;
    }
}

}  // namespace slewsim
