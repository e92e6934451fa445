#include "quatsurf/fields.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace quatsurf {

double l2(std::span<const double> f) {
    double s = 0.0;
    for (double v : f) {
        if (std::isfinite(v)) s += v * v;
    }
    return std::sqrt(s);
}

double l2(std::span<const Quaternion> f) {
    double s = 0.0;
    for (const auto& q : f) {
        if (q.is_finite()) s += q.norm2();
    }
    return std::sqrt(s);
}

double l2(std::span<const FormValue> f) {
    double s = 0.0;
    for (const auto& t : f) {
        if (t.ax.is_finite() && t.ay.is_finite()) s += t.norm2();
    }
    return std::sqrt(s);
}

double l2(std::span<const Complex> f) {
    double s = 0.0;
    for (const auto& c : f) {
        if (std::isfinite(c.real()) && std::isfinite(c.imag())) s += std::norm(c);
    }
    return std::sqrt(s);
}

double max_abs(std::span<const double> f) {
    double m = 0.0;
    for (double v : f) {
        if (std::isfinite(v)) m = std::max(m, std::abs(v));
    }
    return m;
}

Stats stats(std::span<const double> f) {
    Stats s;
    s.min = std::numeric_limits<double>::infinity();
    s.max = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (double v : f) {
        if (!std::isfinite(v)) continue;
        sum += v;
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
        ++s.count;
    }
    if (s.count == 0) return Stats{};
    s.mean = sum / static_cast<double>(s.count);
    double var = 0.0;
    for (double v : f) {
        if (std::isfinite(v)) var += (v - s.mean) * (v - s.mean);
    }
    s.stddev = std::sqrt(var / static_cast<double>(s.count));
    return s;
}

double diameter(std::span<const Quaternion> points) {
    if (points.empty()) return 0.0;
    std::array<double, 3> lo{INFINITY, INFINITY, INFINITY};
    std::array<double, 3> hi{-INFINITY, -INFINITY, -INFINITY};
    for (const auto& p : points) {
        const auto v = p.to_vector();
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], v[a]);
            hi[a] = std::max(hi[a], v[a]);
        }
    }
    double d = 0.0;
    for (int a = 0; a < 3; ++a) d += (hi[a] - lo[a]) * (hi[a] - lo[a]);
    return std::sqrt(d);
}

std::vector<double> magnitudes(std::span<const Quaternion> f) {
    std::vector<double> out(f.size());
    std::transform(f.begin(), f.end(), out.begin(), [](const Quaternion& q) { return q.norm(); });
    return out;
}

std::vector<double> magnitudes(std::span<const FormValue> f) {
    std::vector<double> out(f.size());
    std::transform(f.begin(), f.end(), out.begin(), [](const FormValue& t) { return norm(t); });
    return out;
}

}  // namespace quatsurf
