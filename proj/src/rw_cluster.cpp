#include "slewsim/rw_cluster.hpp"

#include <algorithm>
#include <cmath>

#include "slewsim/errors.hpp"

namespace slewsim {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Mat3x4 z_matrix(double alpha, double beta) {
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    const double cb = std::cos(beta), sb = std::sin(beta);
    Mat3x4 z;
    z(0, 0) = ca * cb;  z(0, 1) = -sa * cb; z(0, 2) = -ca * cb; z(0, 3) = sa * cb;
    z(1, 0) = sa * cb;  z(1, 1) = ca * cb;  z(1, 2) = -sa * cb; z(1, 3) = -ca * cb;
    z(2, 0) = sb;       z(2, 1) = sb;       z(2, 2) = sb;       z(2, 3) = sb;
    return z;
}

RwCluster RwCluster::make(double alpha, double beta, double tau_w_max,
                          double h_w_max) {
    if (!(tau_w_max > 0.0) || !(h_w_max > 0.0))
        throw SimError("wheel saturation limits must be positive");
    if (!(beta > 0.0) || !(beta < kPi / 2.0))
        throw SimError("pyramid elevation must lie in (0, pi/2)");
    RwCluster c;
    c.alpha = alpha;
    c.beta = beta;
    c.tau_w_max = tau_w_max;
    c.h_w_max = h_w_max;
    c.Z = z_matrix(alpha, beta);

    // Z+ = Z^T (Z Z^T)^-1.
    Mat3 zzt = Mat3::zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 4; ++k) zzt(i, j) += c.Z(i, k) * c.Z(j, k);
    const Mat3 zzt_inv = zzt.inverse();
    for (int r = 0; r < 4; ++r)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int i = 0; i < 3; ++i) s += c.Z(i, r) * zzt_inv(i, j);
            c.Z_pinv(r, j) = s;
        }
    return c;
}

Vec4 allocate(const RwCluster& cluster, const Vec3& tau_body) {
    return cluster.Z_pinv * tau_body;
}

Vec3 wheels_to_body(const RwCluster& cluster, const Vec4& x_w) {
    return cluster.Z * x_w;
}

double envelope_radius(const RwCluster& cluster, EnvelopeKind kind) {
    const double cap =
        kind == EnvelopeKind::momentum ? cluster.h_w_max : cluster.tau_w_max;
    double radius = -1.0;
    // Each facet family fixes two wheels at +/-cap and lets the other two
    // span the facet; the four sign patterns per family produce two
    // supporting planes and two interior duplicates, so keeping the largest
    // offset per normal direction selects the true boundary plane.
    for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
            const Vec3 za = cluster.Z.column(a);
            const Vec3 zb = cluster.Z.column(b);
            const Vec3 n = za.cross(zb);
            if (n.norm() < 1e-12)
                throw DegenerateGeometry("coplanar spin axes give a zero facet normal");
            const Vec3 nh = n.normalized();
            double offset = 0.0;
            for (int sign_i = -1; sign_i <= 1; sign_i += 2)
                for (int sign_j = -1; sign_j <= 1; sign_j += 2) {
                    Vec3 fixed{};
                    int slot = 0;
                    for (int w = 0; w < 4; ++w) {
                        if (w == a || w == b) continue;
                        fixed += (slot++ == 0 ? sign_i : sign_j) * cap *
                                 cluster.Z.column(w);
                    }
                    offset = std::fmax(offset, std::fabs(nh.dot(fixed)));
                }
            radius = radius < 0.0 ? offset : std::fmin(radius, offset);
        }
    }
    return radius;
}

double omega_max(double H_bar, const DisturbanceModel& dist,
                 const InertiaModel& inertia) {
    const double h_d = (dist.d1_bar + 0.707 * dist.d2_bar) * dist.period / 4.0;
    if (!(H_bar > h_d))
        throw InfeasibleActuation(
            "disturbance momentum accumulation exceeds the envelope radius");
    return (H_bar - h_d) / l2_induced_norm(inertia.upper());
}

TorqueFilter TorqueFilter::design(double dt) {
    // H(s) = (1.214 s + 0.7625) / (s^2 + 2.40 s + 0.7625), Tustin at 1/dt.
    const double B1 = 1.214, B0 = 0.7625, A1 = 2.40, A0 = 0.7625;
    const double K = 2.0 / dt;
    const double d0 = K * K + A1 * K + A0;
    TorqueFilter f;
    f.b0 = (B1 * K + B0) / d0;
    f.b1 = 2.0 * B0 / d0;
    f.b2 = (B0 - B1 * K) / d0;
    f.a1 = (2.0 * A0 - 2.0 * K * K) / d0;
    f.a2 = (K * K - A1 * K + A0) / d0;
    return f;
}

std::array<double, 2> TorqueFilter::pole_magnitudes(double dt) {
    const TorqueFilter f = design(dt);
    const double disc = f.a1 * f.a1 - 4.0 * f.a2;
    if (disc >= 0.0) {
        const double r = std::sqrt(disc);
        return {std::fabs((-f.a1 + r) / 2.0), std::fabs((-f.a1 - r) / 2.0)};
    }
    const double mag = std::sqrt(f.a2);
    return {mag, mag};
}

WheelStepResult wheel_step(const RwCluster& cluster, const WheelState& ws,
                           const Vec4& tau_w_cmd, double dt) {
    WheelStepResult out;
    out.state = ws;
    out.state.torque_saturated = false;
    out.state.momentum_saturated = false;
    for (int i = 0; i < 4; ++i) {
        double cmd = tau_w_cmd[i];
        if (std::fabs(cmd) > cluster.tau_w_max) {
            cmd = std::copysign(cluster.tau_w_max, cmd);
            out.state.torque_saturated = true;
        }
        const double filtered = out.state.filters[static_cast<std::size_t>(i)].step(cmd);
        const double h_old = ws.h_w[i];
        double h_new = h_old - filtered * dt;
        if (std::fabs(h_new) > cluster.h_w_max) {
            h_new = std::copysign(cluster.h_w_max, h_new);
            out.state.momentum_saturated = true;
        }
        out.state.h_w[i] = h_new;
        out.tau_actual[i] = (h_old - h_new) / dt;
    }
    return out;
}

}  // namespace slewsim
