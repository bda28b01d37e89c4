#pragma once

#include <array>

#include "slewsim/math.hpp"
#include "slewsim/rigid_body.hpp"

namespace slewsim {

// 3x4 wheel-to-body map and its Moore-Penrose pseudo-inverse.
struct Mat3x4 {
    std::array<double, 12> m{};
    double& operator()(int r, int c) { return m[static_cast<std::size_t>(4 * r + c)]; }
    double operator()(int r, int c) const { return m[static_cast<std::size_t>(4 * r + c)]; }
    Vec3 operator*(const Vec4& v) const {
        Vec3 out;
        for (int r = 0; r < 3; ++r) {
            double s = 0.0;
            for (int c = 0; c < 4; ++c) s += (*this)(r, c) * v[c];
            out[r] = s;
        }
        return out;
    }
    Vec3 column(int c) const { return {(*this)(0, c), (*this)(1, c), (*this)(2, c)}; }
};

struct Mat4x3 {
    std::array<double, 12> m{};
    double& operator()(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }
    double operator()(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }
    Vec4 operator*(const Vec3& v) const {
        Vec4 out;
        for (int r = 0; r < 4; ++r)
            out[r] = (*this)(r, 0) * v.x + (*this)(r, 1) * v.y + (*this)(r, 2) * v.z;
        return out;
    }
};

// Spin-axis direction matrix of the four-wheel pyramid; columns are unit
// vectors, the third row is sin(beta) across all wheels.
Mat3x4 z_matrix(double alpha, double beta);

struct RwCluster {
    double alpha = 0;       // rad
    double beta = 0;        // rad
    double tau_w_max = 0;   // N m per wheel
    double h_w_max = 0;     // N m s per wheel
    Mat3x4 Z;
    Mat4x3 Z_pinv;

    static RwCluster make(double alpha, double beta, double tau_w_max,
                          double h_w_max);
};

// Minimum-norm wheel torques solving Z tau_w = tau_body.
Vec4 allocate(const RwCluster& cluster, const Vec3& tau_body);

Vec3 wheels_to_body(const RwCluster& cluster, const Vec4& x_w);

enum class EnvelopeKind { momentum, torque };

// Radius of the largest origin-centered sphere inside the capability
// zonotope {Z x : |x_i| <= cap}. Facets are spanned by two free wheels with
// the other two saturated; the radius is the smallest facet-plane distance.
double envelope_radius(const RwCluster& cluster, EnvelopeKind kind);

// Angular-rate ceiling that keeps the stored momentum inside the envelope
// after the worst-case quarter-orbit disturbance accumulation.
double omega_max(double H_bar, const DisturbanceModel& dist,
                 const InertiaModel& inertia);

// Bilinear-discretized second-order torque-tracking filter, one per wheel.
struct TorqueFilter {
    double b0 = 1, b1 = 0, b2 = 0, a1 = 0, a2 = 0;
    double s1 = 0, s2 = 0;

    static TorqueFilter design(double dt);
    double step(double x) {
        const double y = b0 * x + s1;
        s1 = b1 * x - a1 * y + s2;
        s2 = b2 * x - a2 * y;
        return y;
    }
    // Poles of the discretized denominator (for stability checks).
    static std::array<double, 2> pole_magnitudes(double dt);
};

struct WheelState {
    Vec4 h_w;  // N m s along spin axes
    std::array<TorqueFilter, 4> filters;
    bool torque_saturated = false;    // last step clipped the command
    bool momentum_saturated = false;  // last step hit a momentum rail
};

struct WheelStepResult {
    WheelState state;
    Vec4 tau_actual;  // torque delivered over the step (after clamps/filter)
};

// Clamp command, filter, integrate h' = -tau, clamp momentum. The reported
// torque is (h_old - h_new)/dt so the momentum coupling stays exact even
// while a rail is active.
WheelStepResult wheel_step(const RwCluster& cluster, const WheelState& ws,
                           const Vec4& tau_w_cmd, double dt);

}  // namespace slewsim
