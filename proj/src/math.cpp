#include "slewsim/math.hpp"

#include <algorithm>

#include "slewsim/errors.hpp"

namespace slewsim {

double Mat3::det() const {
    const Mat3& a = *this;
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

Mat3 Mat3::inverse() const {
    const Mat3& a = *this;
    const double d = det();
    // Hadamard-ratio singularity guard: |det| is compared against the product
    // of row norms, which tolerates well-conditioned but small determinants.
    double hadamard = 1.0;
    for (int r = 0; r < 3; ++r) {
        const Vec3 row{a(r, 0), a(r, 1), a(r, 2)};
        hadamard *= row.norm();
    }
    if (std::fabs(d) < 1e-13 * hadamard || hadamard == 0.0)
        throw SingularPerturbation("3x3 matrix is numerically singular");
    Mat3 r;
    r(0, 0) = (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) / d;
    r(0, 1) = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) / d;
    r(0, 2) = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) / d;
    r(1, 0) = (a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2)) / d;
    r(1, 1) = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) / d;
    r(1, 2) = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) / d;
    r(2, 0) = (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)) / d;
    r(2, 1) = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) / d;
    r(2, 2) = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) / d;
    return r;
}

Mat3 skew(const Vec3& v) {
    return {{0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0}};
}

std::array<double, 3> sym_eigenvalues(const Mat3& input) {
    // Classic cyclic Jacobi; a handful of sweeps is plenty for 3x3.
    Mat3 a = input;
    for (int sweep = 0; sweep < 32; ++sweep) {
        double off = std::fabs(a(0, 1)) + std::fabs(a(0, 2)) + std::fabs(a(1, 2));
        if (off < 1e-15 * (1.0 + std::fabs(a(0, 0)) + std::fabs(a(1, 1)) + std::fabs(a(2, 2))))
            break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (std::fabs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                Mat3 g = Mat3::identity();
                g(p, p) = c; g(q, q) = c; g(p, q) = s; g(q, p) = -s;
                a = g.transpose() * a * g;
                // Force exact symmetry to keep rounding from accumulating.
                a(q, p) = a(p, q) = 0.5 * (a(p, q) + a(q, p));
            }
        }
    }
    std::array<double, 3> ev{a(0, 0), a(1, 1), a(2, 2)};
    std::sort(ev.begin(), ev.end());
    return ev;
}

double l2_induced_norm(const Mat3& a) {
    const auto ev = sym_eigenvalues(a.transpose() * a);
    return std::sqrt(std::fmax(0.0, ev[2]));
}

double l1_induced_norm(const Mat3& a) {
    double best = 0.0;
    for (int j = 0; j < 3; ++j) {
        double col = std::fabs(a(0, j)) + std::fabs(a(1, j)) + std::fabs(a(2, j));
        best = std::fmax(best, col);
    }
    return best;
}

Quaternion Quaternion::from_parts(double eta, const Vec3& eps) {
    Quaternion q;
    q.eta = eta;
    q.eps = eps;
    return q.normalized();
}

Quaternion Quaternion::from_axis_angle(const Vec3& axis, double angle) {
    const Vec3 a = axis.normalized();
    Quaternion q;
    q.eta = std::cos(0.5 * angle);
    q.eps = a * std::sin(0.5 * angle);
    return q.normalized();
}

Quaternion Quaternion::normalized() const {
    const double n = norm();
    if (!(n > 0.0) || !std::isfinite(n))
        throw SimError("cannot normalize a zero or non-finite quaternion");
    Quaternion q;
    q.eta = eta / n;
    q.eps = eps / n;
    return q;
}

Quaternion quat_mul(const Quaternion& a, const Quaternion& b) {
    Quaternion q;
    q.eta = a.eta * b.eta - a.eps.dot(b.eps);
    q.eps = b.eps * a.eta + a.eps * b.eta + a.eps.cross(b.eps);
    return q.normalized();
}

Quaternion quat_conj(const Quaternion& q) {
    Quaternion r;
    r.eta = q.eta;
    r.eps = -q.eps;
    return r;
}

Mat3 rotation_matrix(const Quaternion& q) {
    const double w = q.eta;
    const Vec3& e = q.eps;
    Mat3 outer;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) outer(i, j) = e[i] * e[j];
    return (w * w - e.dot(e)) * Mat3::identity() + 2.0 * outer - 2.0 * w * skew(e);
}

Quaternion quat_error(const Quaternion& q_ref, const Quaternion& q) {
    return quat_mul(quat_conj(q_ref), q);
}

Quaternion shortest_rotation(const Vec3& m, const Vec3& n) {
    const double a = m.dot(n);
    if (1.0 + a < 1e-12)
        throw AntiparallelAxes("shortest rotation undefined for antiparallel axes");
    const Vec3 b = m.cross(n);
    const double s = std::sqrt((1.0 + a) * (1.0 + a) + b.dot(b));
    Quaternion q;
    q.eta = (1.0 + a) / s;
    q.eps = b / s;
    return q.normalized();
}

}  // namespace slewsim
