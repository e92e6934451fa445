#include "quatsurf/forms.hpp"

#include <cmath>

#include "quatsurf/errors.hpp"

namespace quatsurf {

void require_unit_imaginary(const Quaternion& n, const char* op) {
    if (!n.is_finite() || std::abs(n.w) > 1e-8 || std::abs(n.norm() - 1.0) > 1e-8) {
        throw ValidationError("quatcalc", op, "normal must be a unit imaginary quaternion");
    }
}

ConformalSplit split_conformal(const FormValue& t, const Quaternion& n) {
    require_unit_imaginary(n, "split_conformal");
    const FormValue nst = n * star(t);
    return {0.5 * (t - nst), 0.5 * (t + nst)};
}

TangentialSplit split_tangential(const FormValue& t, const Quaternion& n) {
    require_unit_imaginary(n, "split_tangential");
    const FormValue ntn{n * t.ax * n, n * t.ay * n};
    return {0.5 * (t + ntn), 0.5 * (t - ntn)};
}

namespace {
double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }
}  // namespace

double conformality_defect(const FormValue& t, const Quaternion& n) {
    return ratio(norm(star(t) - n * t), norm(t));
}

double anticonformality_defect(const FormValue& t, const Quaternion& n) {
    return ratio(norm(star(t) + n * t), norm(t));
}

double transversal_fraction(const FormValue& t, const Quaternion& n) {
    const FormValue ntn{n * t.ax * n, n * t.ay * n};
    return ratio(norm(0.5 * (t - ntn)), norm(t));
}

}  // namespace quatsurf
