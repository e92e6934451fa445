#pragma once

// Pointwise calculus of quaternion-valued one-forms on an oriented
// isothermal chart.  A one-form is stored by its values on the coordinate
// vectors, (tau(d/dx), tau(d/dy)); the complex structure J sends
// d/dx -> d/dy and d/dy -> -d/dx.

#include <utility>
#include <vector>

#include "quatsurf/quaternion.hpp"

namespace quatsurf {

struct FormValue {
    Quaternion ax;  // tau(d/dx)
    Quaternion ay;  // tau(d/dy)

    constexpr FormValue& operator+=(const FormValue& o) {
        ax += o.ax;
        ay += o.ay;
        return *this;
    }
    constexpr FormValue& operator-=(const FormValue& o) {
        ax -= o.ax;
        ay -= o.ay;
        return *this;
    }
    constexpr FormValue& operator*=(double s) {
        ax *= s;
        ay *= s;
        return *this;
    }
    double norm2() const { return ax.norm2() + ay.norm2(); }
    constexpr bool operator==(const FormValue&) const = default;
};

constexpr FormValue operator+(FormValue a, const FormValue& b) { return a += b; }
constexpr FormValue operator-(FormValue a, const FormValue& b) { return a -= b; }
constexpr FormValue operator-(const FormValue& a) { return {-a.ax, -a.ay}; }
constexpr FormValue operator*(double s, FormValue a) { return a *= s; }
constexpr FormValue operator*(FormValue a, double s) { return a *= s; }
// Left and right multiplication by a quaternion-valued function.
constexpr FormValue operator*(const Quaternion& q, const FormValue& t) { return {q * t.ax, q * t.ay}; }
constexpr FormValue operator*(const FormValue& t, const Quaternion& q) { return {t.ax * q, t.ay * q}; }

inline double norm(const FormValue& t) { return std::sqrt(t.norm2()); }

// Declared algebraic type of a stored one-form.
enum class FormKind { general, conformal, anticonformal };

struct QOneForm {
    std::vector<FormValue> values;
    FormKind kind = FormKind::general;
    bool tangential = false;

    std::size_t size() const { return values.size(); }
    const FormValue& operator[](std::size_t n) const { return values[n]; }
    FormValue& operator[](std::size_t n) { return values[n]; }
};

// (*tau)(X) = tau(JX).
constexpr FormValue star(const FormValue& t) { return {t.ay, -t.ax}; }

struct ConformalSplit {
    FormValue conformal;      // *kc = N kc
    FormValue anticonformal;  // *ka = -N ka
};

struct TangentialSplit {
    FormValue tangential;  // anticommutes with N
    FormValue transversal;  // commutes with N
};

// Split with respect to a unit imaginary normal N.  Throws ValidationError
// if N is not unit imaginary (tolerance 1e-8).
ConformalSplit split_conformal(const FormValue& t, const Quaternion& n);
TangentialSplit split_tangential(const FormValue& t, const Quaternion& n);

// (alpha ^ beta)(d/dx, d/dy) = alpha(d/dx) beta(d/dy) - alpha(d/dy) beta(d/dx).
constexpr Quaternion wedge(const FormValue& a, const FormValue& b) { return a.ax * b.ay - a.ay * b.ax; }

// Residuals of the defining identities, normalized by |tau| (0 if tau = 0).
double conformality_defect(const FormValue& t, const Quaternion& n);      // |*t - N t| / |t|
double anticonformality_defect(const FormValue& t, const Quaternion& n);  // |*t + N t| / |t|
double transversal_fraction(const FormValue& t, const Quaternion& n);     // |t^perp| / |t|

// Throws ValidationError unless |n| = 1 and Re n = 0 to 1e-8.
void require_unit_imaginary(const Quaternion& n, const char* op);

}  // namespace quatsurf
