#pragma once

#include "slewsim/math.hpp"
#include "slewsim/rigid_body.hpp"

namespace slewsim {

// Boundary-layer sliding-mode gains. S is the componentwise saturation
// half-width sigma_bar/sqrt(3), so |sigma| <= sigma_bar once every component
// saturates linearly.
struct SmcParams {
    double lambda = 0;     // 1/s
    double gamma = 0;      // rad/s^2
    double sigma_bar = 0;  // rad/s
    double k = 0;          // margin factor
    double S = 0;          // sigma_bar / sqrt(3)
    double psi = 0;        // rate-derivative bound multiplier

    static SmcParams make(double lambda, double gamma, double sigma_bar,
                          double k = 0.0, double psi = 0.0);
};

struct TrackingError {
    Vec3 e_omega;   // rad/s
    Vec3 e_eps;     // vector part of conj(q*) (x) q
    double e_eta = 1.0;
    Vec3 sigma;     // e_omega + lambda e_eps
};

TrackingError tracking_error(const Quaternion& q, const Vec3& omega,
                             const Quaternion& q_star, const Vec3& omega_star,
                             const SmcParams& p);

// Componentwise boundary-layer saturation: sign outside |.| >= S, linear
// interpolation inside.
Vec3 sat(const Vec3& sigma, const SmcParams& p);

struct ControlOutput {
    Vec3 u;    // rad/s^2
    Vec3 tau;  // N m, tau = I* u
};

ControlOutput control_input(const TrackingError& te, const SmcParams& p,
                            const Mat3& I_star);

// Diagnostics of the closed-form gain synthesis; filled in even when the
// feasibility conditions fail so callers can report honestly.
struct GainReport {
    double eps_e_bar = 0;
    double eps_floor = 0;
    double psi = 0;
    Mat3 delta_hat;          // elementwise bound on the inverse perturbation
    double delta_hat_norm = 0;       // l2-induced
    double delta_hat_I_norm1 = 0;    // l1-induced norm of delta_hat * I*
    double base_gain = 0;    // gamma at k = 1
    double gamma = 0;        // k * base_gain
    double ceiling = 0;      // tau_bar / |I*|
    double k_max = 0;        // upper end of the admissible k interval
    double feasibility_rhs = 0;  // torque the reaching bound actually needs
    bool torque_feasible = false;
    bool k_admissible = false;
};

GainReport gain_report(const InertiaModel& inertia, double omega_bar,
                       double H_bar, double tau_bar, double d_bar,
                       double lambda, double k, double eps_e_bar,
                       double eps_floor);

// Closed-form stabilizing gain. Throws InfeasibleTorque when the torque
// budget cannot cover the reaching-phase bound and InvalidMargin when k is
// outside its admissible interval.
SmcParams synthesize_gains(const InertiaModel& inertia, double omega_bar,
                           double H_bar, double tau_bar, double d_bar,
                           double lambda, double k, double sigma_bar,
                           double eps_e_bar, double eps_floor);

// Guaranteed steady-state |e_eps| bound sigma_bar / lambda.
double accuracy_bound(const SmcParams& p);

}  // namespace slewsim
