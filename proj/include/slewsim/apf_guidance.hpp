#pragma once

#include <vector>

#include "slewsim/math.hpp"
#include "slewsim/rigid_body.hpp"

namespace slewsim {

// Keep-out cone around an inertial direction.
struct ForbiddenZone {
    Vec3 n_hat;              // unit, inertial frame
    double theta_floor = 0;  // rad, half-apex angle
    double eps_floor = 0;    // sin(theta_floor/2), derived

    static ForbiddenZone make(const Vec3& axis, double theta_floor);
};

// Gains of the attractive/repulsive guidance fields. The attractive layer
// switches from conic to parabolic at |eps_e| = eps_e_bar; alpha1 is chosen
// for continuity and alpha2 caps the commanded rate at omega_bar/2 so the
// wheels can absorb the maneuver momentum.
struct ApfParams {
    double alpha1 = 0;     // 1/s
    double alpha2 = 0;     // rad/s
    double eps_e_bar = 0;  // switch radius
    double omega_bar = 0;  // rad/s

    double zeta_for(const ForbiddenZone& z) const {
        return alpha2 * z.eps_floor * z.eps_floor;
    }
};

// eps_e_bar is the stopping distance from speed omega_bar/2 under the
// worst-case deceleration |Ibar^-1| tau_bar.
ApfParams apf_params(double omega_bar, double tau_bar, const InertiaModel& inertia);

struct GuidanceState {
    Quaternion q_star;
    Vec3 omega_star;  // rad/s, body frame
};

// Attractive angular-rate field evaluated at the attitude error
// e_q = conj(q_d) (x) q. sign_plus(eta_e) steers toward the nearer of the
// two quaternion covers, which is what suppresses unwinding.
Vec3 attractive_rate(const Quaternion& e_q, const ApfParams& p);

// Sum of the per-zone hyperbolic repulsion fields, evaluated from the
// orientation of the boresight relative to each forbidden axis. Throws
// BoresightOnForbiddenAxis if some |eps~_j| <= 1e-6.
Vec3 repulsive_rate(const Quaternion& q, const Vec3& m_hat_body,
                    const std::vector<ForbiddenZone>& zones, const ApfParams& p);

// Combined reference rate in body coordinates.
Vec3 reference_rate(const Quaternion& q, const Quaternion& q_d,
                    const Vec3& m_hat_body,
                    const std::vector<ForbiddenZone>& zones, const ApfParams& p);

// Advance the reference attitude with a held omega_star over dt (RK4).
GuidanceState propagate_reference(const GuidanceState& g, const Vec3& omega_star,
                                  double dt);

// Guaranteed closest approach to zone j_excluded when the other zones pull
// toward it (multi-zone interference bound).
double theta_hat(const std::vector<double>& theta_js, double theta_floor,
                 std::size_t j_excluded);

// Minimum pairwise zone spacing that keeps |omega*| <= omega_bar with N
// zones active. Throws InfeasibleSpacing when sqrt(N) sin(theta_floor/2) > 1.
double theta_min(int n_zones, double theta_floor);

struct PointingMargin {
    double theta = 0;  // rad, boresight-to-axis angle
    bool violated = false;
};

std::vector<PointingMargin> pointing_margins(const Quaternion& q,
                                             const Vec3& m_hat_body,
                                             const std::vector<ForbiddenZone>& zones);

}  // namespace slewsim
