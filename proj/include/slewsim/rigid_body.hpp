#pragma once

#include "slewsim/math.hpp"

namespace slewsim {

// Nominal inertia tensor, its elementwise uncertainty bound and the
// (possibly sampled) actual inertia driving the plant.
struct InertiaModel {
    Mat3 I_star;       // kg m^2, nominal
    Mat3 delta_bound;  // kg m^2, elementwise bound on |I_true - I_star|
    Mat3 I_true;       // kg m^2, actual
    Mat3 I_star_inv;   // cached
    Mat3 I_true_inv;   // cached

    // Validates symmetry, positive definiteness and the elementwise bounds.
    static InertiaModel make(const Mat3& I_star, const Mat3& delta_bound,
                             const Mat3& I_true);
    // Actual inertia equal to the nominal one.
    static InertiaModel nominal(const Mat3& I_star, const Mat3& delta_bound);

    Mat3 upper() const { return I_star + delta_bound; }  // elementwise
    Mat3 lower() const { return I_star - delta_bound; }
};

// Secular bias plus an orbital-period sinusoid applied on each body axis,
// norm-clamped so that |d(t)| <= d_bar holds unconditionally.
struct DisturbanceModel {
    Vec3 bias;        // N m
    Vec3 amp;         // N m
    double freq = 0;  // rad/s
    double phase = 0; // rad
    double d_bar = 0; // N m, norm bound on d(t)
    double d1_bar = 0;  // N m, bound used for the momentum accumulation
    double d2_bar = 0;  // N m
    double period = 0;  // s, orbital period entering the accumulation
};

Vec3 disturbance_at(double t, const DisturbanceModel& m);

struct PlantState {
    Quaternion q;  // body w.r.t. inertial
    Vec3 omega;    // rad/s, body frame
    double t = 0;  // s
};

struct StateDerivative {
    double eta_dot = 0;
    Vec3 eps_dot;
    Vec3 omega_dot;
};

// Rigid-body attitude kinematics and dynamics with reaction-wheel momentum:
// eta'  = -omega^T eps / 2
// eps'  = (eta omega - omega^x eps) / 2
// omega'= I^-1 (-omega^x H + tau + d),  H = I omega + h
StateDerivative state_derivative(const PlantState& s, const Vec3& tau,
                                 const Vec3& h, const Vec3& d,
                                 const InertiaModel& inertia);

// Elementwise bound on the inverse-inertia perturbation
// D^ = -I*^-1 D (I + I*^-1 D)^-1 I*^-1 over the symmetric box |D| <= bound,
// obtained by enumerating the 2^6 sign corners of the box.
Mat3 delta_hat_bound(const InertiaModel& inertia);

// Piecewise-constant actuation over one integrator step: torque tau is held,
// wheel momentum continues along h(t) = h0 + h_dot * t while the step runs.
struct PlantInputs {
    Vec3 tau;
    Vec3 h0;
    Vec3 h_dot;
    const DisturbanceModel* disturbance = nullptr;  // null: d = 0
};

// Classical RK4 step; quaternion renormalized on exit.
PlantState rk4_step(const PlantState& s, double dt, const PlantInputs& in,
                    const InertiaModel& inertia);

}  // namespace slewsim
