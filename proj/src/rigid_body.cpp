#include "slewsim/rigid_body.hpp"

#include <cmath>

#include "slewsim/errors.hpp"

namespace slewsim {

namespace {

bool symmetric(const Mat3& a, double tol) {
    return std::fabs(a(0, 1) - a(1, 0)) <= tol &&
           std::fabs(a(0, 2) - a(2, 0)) <= tol &&
           std::fabs(a(1, 2) - a(2, 1)) <= tol;
}

bool positive_definite(const Mat3& a) {
    return sym_eigenvalues(a)[0] > 0.0;
}

}  // namespace

InertiaModel InertiaModel::make(const Mat3& I_star, const Mat3& delta_bound,
                                const Mat3& I_true) {
    const double scale = l2_induced_norm(I_star);
    if (!symmetric(I_star, 1e-9 * scale) || !positive_definite(I_star))
        throw SimError("nominal inertia must be symmetric positive definite");
    if (!symmetric(I_true, 1e-9 * scale) || !positive_definite(I_true))
        throw SimError("actual inertia must be symmetric positive definite");
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (delta_bound(i, j) < 0.0)
                throw SimError("inertia uncertainty bound must be nonnegative");
            if (std::fabs(I_true(i, j) - I_star(i, j)) > delta_bound(i, j) + 1e-12 * scale)
                throw SimError("actual inertia violates the uncertainty bound");
        }
    // Keeps every admissible inertia physically meaningful (diagonal stays
    // positive); off-diagonal bounds are free.
    for (int i = 0; i < 3; ++i)
        if (!(delta_bound(i, i) < I_star(i, i)))
            throw SimError("uncertainty bound exceeds the nominal inertia diagonal");
    InertiaModel m;
    m.I_star = I_star;
    m.delta_bound = delta_bound;
    m.I_true = I_true;
    m.I_star_inv = I_star.inverse();
    m.I_true_inv = I_true.inverse();
    return m;
}

InertiaModel InertiaModel::nominal(const Mat3& I_star, const Mat3& delta_bound) {
    return make(I_star, delta_bound, I_star);
}

Vec3 disturbance_at(double t, const DisturbanceModel& m) {
    const double s = std::sin(m.freq * t + m.phase);
    Vec3 d = m.bias + m.amp * s;
    const double n = d.norm();
    if (m.d_bar > 0.0 && n > m.d_bar) d = d * (m.d_bar / n);
    return d;
}

StateDerivative state_derivative(const PlantState& s, const Vec3& tau,
                                 const Vec3& h, const Vec3& d,
                                 const InertiaModel& inertia) {
    StateDerivative out;
    out.eta_dot = -0.5 * s.omega.dot(s.q.eps);
    out.eps_dot = 0.5 * (s.q.eta * s.omega - s.omega.cross(s.q.eps));
    const Vec3 H = inertia.I_true * s.omega + h;
    out.omega_dot = inertia.I_true_inv * (-s.omega.cross(H) + tau + d);
    return out;
}

Mat3 delta_hat_bound(const InertiaModel& inertia) {
    Mat3 bound = Mat3::zero();
    const Mat3& inv = inertia.I_star_inv;
    // Six independent entries of the symmetric perturbation, each at +/- its
    // bound: indices (0,0),(1,1),(2,2),(0,1),(0,2),(1,2).
    const int idx[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};
    for (int corner = 0; corner < 64; ++corner) {
        Mat3 delta = Mat3::zero();
        for (int k = 0; k < 6; ++k) {
            const double sgn = (corner >> k) & 1 ? 1.0 : -1.0;
            const int i = idx[k][0], j = idx[k][1];
            delta(i, j) = sgn * inertia.delta_bound(i, j);
            delta(j, i) = delta(i, j);
        }
        const Mat3 middle = Mat3::identity() + inv * delta;
        Mat3 middle_inv;
        try {
            middle_inv = middle.inverse();
        } catch (const SingularPerturbation&) {
            throw SingularPerturbation(
                "an uncertainty-box corner makes I + I*^-1 D singular");
        }
        const Mat3 hat = -1.0 * (inv * delta * middle_inv * inv);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                bound(i, j) = std::fmax(bound(i, j), std::fabs(hat(i, j)));
    }
    return bound;
}

PlantState rk4_step(const PlantState& s, double dt, const PlantInputs& in,
                    const InertiaModel& inertia) {
    static const DisturbanceModel kNoDisturbance{};
    const DisturbanceModel& dist = in.disturbance ? *in.disturbance : kNoDisturbance;

    auto eval = [&](const PlantState& x, double local_t) {
        const Vec3 h = in.h0 + in.h_dot * local_t;
        const Vec3 d = in.disturbance ? disturbance_at(x.t, dist) : Vec3{};
        return state_derivative(x, in.tau, h, d, inertia);
    };
    auto advance = [&](const PlantState& x, const StateDerivative& k, double f) {
        PlantState y;
        y.q.eta = x.q.eta + f * k.eta_dot;    // un-normalized mid-stage value
        y.q.eps = x.q.eps + k.eps_dot * f;
        y.omega = x.omega + k.omega_dot * f;
        y.t = x.t + f;
        return y;
    };

    const StateDerivative k1 = eval(s, 0.0);
    const PlantState s2 = advance(s, k1, 0.5 * dt);
    const StateDerivative k2 = eval(s2, 0.5 * dt);
    const PlantState s3 = advance(s, k2, 0.5 * dt);
    const StateDerivative k3 = eval(s3, 0.5 * dt);
    const PlantState s4 = advance(s, k3, dt);
    const StateDerivative k4 = eval(s4, dt);

    PlantState out;
    out.t = s.t + dt;
    out.q.eta = s.q.eta + dt / 6.0 * (k1.eta_dot + 2 * k2.eta_dot + 2 * k3.eta_dot + k4.eta_dot);
    out.q.eps = s.q.eps + dt / 6.0 * (k1.eps_dot + k2.eps_dot * 2.0 + k3.eps_dot * 2.0 + k4.eps_dot);
    out.omega = s.omega + dt / 6.0 * (k1.omega_dot + k2.omega_dot * 2.0 + k3.omega_dot * 2.0 + k4.omega_dot);
    out.q = out.q.normalized();
    return out;
}

}  // namespace slewsim
