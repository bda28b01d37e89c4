#pragma once

#include <array>
#include <cmath>

namespace slewsim {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    double norm1() const { return std::fabs(x) + std::fabs(y) + std::fabs(z); }
    double norm_inf() const {
        return std::fmax(std::fabs(x), std::fmax(std::fabs(y), std::fabs(z)));
    }
    Vec3 normalized() const { return *this / norm(); }
    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Per-wheel quantities for the four-wheel cluster.
struct Vec4 {
    std::array<double, 4> e{0.0, 0.0, 0.0, 0.0};

    double& operator[](int i) { return e[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return e[static_cast<std::size_t>(i)]; }

    Vec4 operator+(const Vec4& o) const {
        return {{e[0] + o.e[0], e[1] + o.e[1], e[2] + o.e[2], e[3] + o.e[3]}};
    }
    Vec4 operator-(const Vec4& o) const {
        return {{e[0] - o.e[0], e[1] - o.e[1], e[2] - o.e[2], e[3] - o.e[3]}};
    }
    Vec4 operator*(double s) const {
        return {{e[0] * s, e[1] * s, e[2] * s, e[3] * s}};
    }
    double norm() const {
        return std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2] + e[3] * e[3]);
    }
    double norm_inf() const {
        double m = 0.0;
        for (double v : e) m = std::fmax(m, std::fabs(v));
        return m;
    }
};

struct Mat3 {
    // Row-major.
    std::array<double, 9> m{0, 0, 0, 0, 0, 0, 0, 0, 0};

    static Mat3 identity() { return {{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }
    static Mat3 zero() { return {}; }

    double& operator()(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }
    double operator()(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }

    Mat3 operator+(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r.m[static_cast<std::size_t>(i)] = m[static_cast<std::size_t>(i)] + o.m[static_cast<std::size_t>(i)];
        return r;
    }
    Mat3 operator-(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r.m[static_cast<std::size_t>(i)] = m[static_cast<std::size_t>(i)] - o.m[static_cast<std::size_t>(i)];
        return r;
    }
    Mat3 operator*(double s) const {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r.m[static_cast<std::size_t>(i)] = m[static_cast<std::size_t>(i)] * s;
        return r;
    }
    Vec3 operator*(const Vec3& v) const {
        return {(*this)(0, 0) * v.x + (*this)(0, 1) * v.y + (*this)(0, 2) * v.z,
                (*this)(1, 0) * v.x + (*this)(1, 1) * v.y + (*this)(1, 2) * v.z,
                (*this)(2, 0) * v.x + (*this)(2, 1) * v.y + (*this)(2, 2) * v.z};
    }
    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }
    Mat3 transpose() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
        return r;
    }
    double det() const;
    Mat3 inverse() const;  // throws SingularPerturbation near det = 0
    Mat3 abs() const {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r.m[static_cast<std::size_t>(i)] = std::fabs(m[static_cast<std::size_t>(i)]);
        return r;
    }
    bool finite() const {
        for (double v : m)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

inline Mat3 operator*(double s, const Mat3& a) { return a * s; }

// Skew-symmetric cross-product matrix, v^x w = v x w.
Mat3 skew(const Vec3& v);

// Eigenvalues of a symmetric 3x3 matrix by cyclic Jacobi sweeps, ascending.
std::array<double, 3> sym_eigenvalues(const Mat3& a);

// l2-induced norm (largest singular value), via Jacobi on A^T A.
double l2_induced_norm(const Mat3& a);

// l1-induced norm (max absolute column sum).
double l1_induced_norm(const Mat3& a);

// Unit attitude quaternion, scalar first: q = [eta, eps^T].
struct Quaternion {
    double eta = 1.0;
    Vec3 eps{};

    static Quaternion identity() { return {}; }
    // Normalizes on construction so downstream algebra can assume |q| = 1.
    static Quaternion from_parts(double eta, const Vec3& eps);
    static Quaternion from_axis_angle(const Vec3& axis, double angle);

    double norm() const {
        return std::sqrt(eta * eta + eps.dot(eps));
    }
    Quaternion normalized() const;
    std::array<double, 4> as_array() const { return {eta, eps.x, eps.y, eps.z}; }
};

// Hamilton product, renormalized.
Quaternion quat_mul(const Quaternion& a, const Quaternion& b);

Quaternion quat_conj(const Quaternion& q);

// Attitude matrix mapping inertial-frame vectors into the body frame,
// R(q) = (eta^2 - eps^T eps) I + 2 eps eps^T - 2 eta eps^x.
Mat3 rotation_matrix(const Quaternion& q);

// conj(q_ref) (x) q.
Quaternion quat_error(const Quaternion& q_ref, const Quaternion& q);

// Quaternion of the shortest rotation carrying unit vector m onto unit
// vector n; eta >= 0 always. Throws AntiparallelAxes when m = -n.
Quaternion shortest_rotation(const Vec3& m, const Vec3& n);

// -1 for negative input, +1 otherwise (zero maps to +1).
inline double sign_plus(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace slewsim
