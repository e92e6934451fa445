#pragma once

// Quaternions H with R^3 = im(H).
//
// A point or vector of R^3 is stored as the imaginary quaternion
// x i + y j + z k.  For imaginary a, b the product is
//   a b = -<a, b> + a x b,
// which is the identity most of the surface calculus leans on.

#include <array>
#include <cmath>
#include <ostream>

namespace quatsurf {

struct Quaternion {
    double w = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double w_, double x_, double y_, double z_) : w{w_}, x{x_}, y{y_}, z{z_} {}
    // Real quaternion.
    constexpr explicit Quaternion(double r) : w{r} {}

    static constexpr Quaternion vector(double vx, double vy, double vz) { return {0.0, vx, vy, vz}; }
    static constexpr Quaternion vector(const std::array<double, 3>& v) { return {0.0, v[0], v[1], v[2]}; }

    constexpr double real() const { return w; }
    constexpr Quaternion imag() const { return {0.0, x, y, z}; }
    constexpr std::array<double, 3> to_vector() const { return {x, y, z}; }

    constexpr Quaternion conj() const { return {w, -x, -y, -z}; }
    constexpr double norm2() const { return w * w + x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }
    constexpr Quaternion inverse() const {
        const double n2 = norm2();
        return {w / n2, -x / n2, -y / n2, -z / n2};
    }
    Quaternion normalized() const {
        const double n = norm();
        return {w / n, x / n, y / n, z / n};
    }
    bool is_finite() const {
        return std::isfinite(w) && std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }

    constexpr Quaternion& operator+=(const Quaternion& o) {
        w += o.w; x += o.x; y += o.y; z += o.z;
        return *this;
    }
    constexpr Quaternion& operator-=(const Quaternion& o) {
        w -= o.w; x -= o.x; y -= o.y; z -= o.z;
        return *this;
    }
    constexpr Quaternion& operator*=(double s) {
        w *= s; x *= s; y *= s; z *= s;
        return *this;
    }

    constexpr bool operator==(const Quaternion&) const = default;
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x, -a.y, -a.z}; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }
constexpr Quaternion operator/(Quaternion a, double s) { return a *= (1.0 / s); }
constexpr Quaternion operator+(Quaternion a, double r) { a.w += r; return a; }
constexpr Quaternion operator-(Quaternion a, double r) { a.w -= r; return a; }

// Hamilton product.
constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

constexpr Quaternion qmul(const Quaternion& a, const Quaternion& b) { return a * b; }

// Euclidean inner product on H = R^4.
constexpr double dot(const Quaternion& a, const Quaternion& b) {
    return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

// Cross product of the imaginary parts, returned as an imaginary quaternion.
constexpr Quaternion cross(const Quaternion& a, const Quaternion& b) {
    return {0.0, a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double distance(const Quaternion& a, const Quaternion& b) { return (a - b).norm(); }

inline std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
    return os << "(" << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ")";
}

namespace quaternion_units {
inline constexpr Quaternion one{1.0, 0.0, 0.0, 0.0};
inline constexpr Quaternion i{0.0, 1.0, 0.0, 0.0};
inline constexpr Quaternion j{0.0, 0.0, 1.0, 0.0};
inline constexpr Quaternion k{0.0, 0.0, 0.0, 1.0};
}  // namespace quaternion_units

}  // namespace quatsurf
