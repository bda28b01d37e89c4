#include "slewsim/smc_control.hpp"

#include <cmath>

#include "slewsim/errors.hpp"

namespace slewsim {

SmcParams SmcParams::make(double lambda, double gamma, double sigma_bar,
                          double k, double psi) {
    if (!(lambda > 0.0) || !(gamma > 0.0) || !(sigma_bar > 0.0))
        throw SimError("SMC gains must be positive");
    if (!(sigma_bar < lambda))
        throw SimError("boundary layer must be thinner than lambda");
    SmcParams p;
    p.lambda = lambda;
    p.gamma = gamma;
    p.sigma_bar = sigma_bar;
    p.k = k;
    p.S = sigma_bar / std::sqrt(3.0);
    p.psi = psi;
    return p;
}

TrackingError tracking_error(const Quaternion& q, const Vec3& omega,
                             const Quaternion& q_star, const Vec3& omega_star,
                             const SmcParams& p) {
    TrackingError te;
    te.e_omega = omega - omega_star;
    const Quaternion e_q = quat_error(q_star, q);
    te.e_eps = e_q.eps;
    te.e_eta = e_q.eta;
    te.sigma = te.e_omega + p.lambda * te.e_eps;
    return te;
}

Vec3 sat(const Vec3& sigma, const SmcParams& p) {
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
        const double s = sigma[i];
        out[i] = std::fabs(s) >= p.S ? (s > 0.0 ? 1.0 : -1.0) : s / p.S;
    }
    return out;
}

ControlOutput control_input(const TrackingError& te, const SmcParams& p,
                            const Mat3& I_star) {
    ControlOutput out;
    out.u = -p.gamma * sat(te.sigma, p);
    out.tau = I_star * out.u;
    return out;
}

GainReport gain_report(const InertiaModel& inertia, double omega_bar,
                       double H_bar, double tau_bar, double d_bar,
                       double lambda, double k, double eps_e_bar,
                       double eps_floor) {
    if (!(omega_bar > 0.0) || !(H_bar > 0.0) || !(tau_bar > 0.0) ||
        !(lambda > 0.0) || !(eps_e_bar > 0.0) || !(eps_floor > 0.0))
        throw SimError("gain synthesis inputs must be positive");

    GainReport r;
    r.eps_e_bar = eps_e_bar;
    r.eps_floor = eps_floor;
    r.psi = 1.0 + (1.0 + eps_e_bar) / (2.0 * eps_e_bar) +
            (1.0 + eps_floor) / eps_floor;
    r.delta_hat = delta_hat_bound(inertia);
    r.delta_hat_norm = l2_induced_norm(r.delta_hat);
    r.delta_hat_I_norm1 = l1_induced_norm(r.delta_hat * inertia.I_star);

    const double numerator =
        (l2_induced_norm(inertia.I_star_inv) + r.delta_hat_norm) *
            (omega_bar * H_bar + d_bar) +
        r.psi * omega_bar * omega_bar + std::sqrt(2.0) * lambda * omega_bar;
    const double denominator = 1.0 - r.delta_hat_I_norm1;
    if (!(denominator > 0.0))
        throw InfeasibleTorque("inverse-inertia perturbation bound exceeds 1");

    const double norm_I_star = l2_induced_norm(inertia.I_star);
    r.base_gain = numerator / denominator;
    r.gamma = k * r.base_gain;
    r.ceiling = tau_bar / norm_I_star;
    r.k_max = r.ceiling / r.base_gain;
    r.feasibility_rhs = norm_I_star * r.base_gain;
    r.torque_feasible = tau_bar > r.feasibility_rhs;
    r.k_admissible = k > 1.0 && k < r.k_max;
    return r;
}

SmcParams synthesize_gains(const InertiaModel& inertia, double omega_bar,
                           double H_bar, double tau_bar, double d_bar,
                           double lambda, double k, double sigma_bar,
                           double eps_e_bar, double eps_floor) {
    const GainReport r = gain_report(inertia, omega_bar, H_bar, tau_bar, d_bar,
                                     lambda, k, eps_e_bar, eps_floor);
    if (!r.torque_feasible)
        throw InfeasibleTorque("torque ceiling below the reaching-phase bound");
    if (!r.k_admissible)
        throw InvalidMargin("margin factor k outside its admissible interval");
    SmcParams p = SmcParams::make(lambda, r.gamma, sigma_bar, k, r.psi);
    if (!(p.gamma < r.ceiling))
        throw InvalidMargin("synthesized gain exceeds the torque ceiling");
    return p;
}

double accuracy_bound(const SmcParams& p) { return p.sigma_bar / p.lambda; }

}  // namespace slewsim
