#include "slewsim/apf_guidance.hpp"

#include <algorithm>
#include <cmath>

#include "slewsim/errors.hpp"

namespace slewsim {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kEpsTildeFloor = 1e-6;
}

ForbiddenZone ForbiddenZone::make(const Vec3& axis, double theta_floor) {
    if (!(theta_floor > 0.0) || !(theta_floor < kPi / 2.0))
        throw SimError("forbidden-zone half angle must lie in (0, pi/2)");
    const double n = axis.norm();
    if (!(n > 0.0)) throw SimError("forbidden-zone axis must be nonzero");
    ForbiddenZone z;
    z.n_hat = axis / n;
    z.theta_floor = theta_floor;
    z.eps_floor = std::sin(0.5 * theta_floor);
    return z;
}

ApfParams apf_params(double omega_bar, double tau_bar, const InertiaModel& inertia) {
    if (!(omega_bar > 0.0) || !(tau_bar > 0.0))
        throw SimError("rate and torque ceilings must be positive");
    ApfParams p;
    p.omega_bar = omega_bar;
    p.alpha2 = 0.5 * omega_bar;
    p.eps_e_bar = p.alpha2 * p.alpha2 /
                  (l2_induced_norm(inertia.upper().inverse()) * tau_bar);
    p.alpha1 = p.alpha2 / p.eps_e_bar;
    return p;
}

Vec3 attractive_rate(const Quaternion& e_q, const ApfParams& p) {
    const Vec3& e = e_q.eps;
    const double n = e.norm();
    const double s = sign_plus(e_q.eta);
    // Descent direction of the attractive potential: the rate must shrink
    // eps_e, so it points against it (toward the nearer quaternion cover).
    if (n <= p.eps_e_bar) return -p.alpha1 * s * e;
    return (-p.alpha2 * s / n) * e;
}

Vec3 repulsive_rate(const Quaternion& q, const Vec3& m_hat_body,
                    const std::vector<ForbiddenZone>& zones, const ApfParams& p) {
    const Vec3 m_inertial = rotation_matrix(q).transpose() * m_hat_body.normalized();
    Vec3 sum;
    for (const ForbiddenZone& z : zones) {
        Quaternion tilde;
        try {
            tilde = shortest_rotation(m_inertial, z.n_hat);
        } catch (const AntiparallelAxes&) {
            // Boresight exactly opposite the forbidden axis: the repulsion
            // direction is undefined and the magnitude negligible; skip.
            continue;
        }
        const double r = tilde.eps.norm();
        if (r <= kEpsTildeFloor)
            throw BoresightOnForbiddenAxis(
                "boresight aligned with a forbidden axis; repulsion undefined");
        sum += (-p.zeta_for(z) / (r * r * r)) * tilde.eps;
    }
    return sum;
}

Vec3 reference_rate(const Quaternion& q, const Quaternion& q_d,
                    const Vec3& m_hat_body,
                    const std::vector<ForbiddenZone>& zones, const ApfParams& p) {
    const Quaternion e_q = quat_error(q_d, q);
    const Vec3 field = attractive_rate(e_q, p) + repulsive_rate(q, m_hat_body, zones, p);
    return rotation_matrix(q) * field;
}

GuidanceState propagate_reference(const GuidanceState& g, const Vec3& omega_star,
                                  double dt) {
    struct Deriv {
        double eta_dot;
        Vec3 eps_dot;
    };
    auto kin = [&](double eta, const Vec3& eps) {
        return Deriv{-0.5 * omega_star.dot(eps),
                     0.5 * (eta * omega_star - omega_star.cross(eps))};
    };
    const double eta0 = g.q_star.eta;
    const Vec3 eps0 = g.q_star.eps;
    const Deriv k1 = kin(eta0, eps0);
    const Deriv k2 = kin(eta0 + 0.5 * dt * k1.eta_dot, eps0 + k1.eps_dot * (0.5 * dt));
    const Deriv k3 = kin(eta0 + 0.5 * dt * k2.eta_dot, eps0 + k2.eps_dot * (0.5 * dt));
    const Deriv k4 = kin(eta0 + dt * k3.eta_dot, eps0 + k3.eps_dot * dt);

    GuidanceState out;
    out.omega_star = omega_star;
    out.q_star = Quaternion::from_parts(
        eta0 + dt / 6.0 * (k1.eta_dot + 2 * k2.eta_dot + 2 * k3.eta_dot + k4.eta_dot),
        eps0 + (k1.eps_dot + k2.eps_dot * 2.0 + k3.eps_dot * 2.0 + k4.eps_dot) * (dt / 6.0));
    return out;
}

double theta_hat(const std::vector<double>& theta_js, double theta_floor,
                 std::size_t j_excluded) {
    const double s2 = std::sin(0.5 * theta_floor) * std::sin(0.5 * theta_floor);
    double denom = 1.0;
    for (std::size_t j = 0; j < theta_js.size(); ++j) {
        if (j == j_excluded) continue;
        const double sj = std::sin(0.5 * theta_js[j]);
        denom += s2 / (sj * sj);
    }
    return 2.0 * std::asin(std::sqrt(s2 / denom));
}

double theta_min(int n_zones, double theta_floor) {
    if (n_zones < 1) throw SimError("zone count must be at least 1");
    const double arg = std::sqrt(static_cast<double>(n_zones)) * std::sin(0.5 * theta_floor);
    if (arg > 1.0)
        throw InfeasibleSpacing("too many / too wide zones: sqrt(N) sin(theta/2) > 1");
    return 2.0 * std::asin(arg);
}

std::vector<PointingMargin> pointing_margins(const Quaternion& q,
                                             const Vec3& m_hat_body,
                                             const std::vector<ForbiddenZone>& zones) {
    const Vec3 m_inertial = rotation_matrix(q).transpose() * m_hat_body.normalized();
    std::vector<PointingMargin> out;
    out.reserve(zones.size());
    for (const ForbiddenZone& z : zones) {
        PointingMargin pm;
        try {
            const Quaternion tilde = shortest_rotation(m_inertial, z.n_hat);
            const double eta = std::clamp(tilde.eta, -1.0, 1.0);
            pm.theta = 2.0 * std::acos(eta);
            // Inclusive boundary: sitting exactly on the cone satisfies the
            // constraint, so leave rounding-level headroom.
            pm.violated = tilde.eps.norm() < z.eps_floor - 1e-12;
        } catch (const AntiparallelAxes&) {
            pm.theta = kPi;
            pm.violated = false;
        }
        out.push_back(pm);
    }
    return out;
}

}  // namespace slewsim
