#pragma once

// Reductions over node fields.  Norms are discrete L2 over all nodes
// (sum of squared magnitudes, square-rooted); "relative" divides two of them.
// Non-finite entries are masked out, which is how branch nodes are excluded.

#include <cmath>
#include <span>
#include <vector>

#include "quatsurf/forms.hpp"
#include "quatsurf/grid.hpp"

namespace quatsurf {

double l2(std::span<const double> f);
double l2(std::span<const Quaternion> f);
double l2(std::span<const FormValue> f);
double l2(std::span<const Complex> f);
double max_abs(std::span<const double> f);

inline double relative(double num, double den) { return den > 0.0 ? num / den : (num > 0.0 ? INFINITY : 0.0); }

struct Stats {
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

// Statistics of the finite entries of f (NaN entries are treated as masked).
Stats stats(std::span<const double> f);

// Bounding-box diagonal of a point cloud of imaginary quaternions.
double diameter(std::span<const Quaternion> points);

std::vector<double> magnitudes(std::span<const Quaternion> f);
std::vector<double> magnitudes(std::span<const FormValue> f);

}  // namespace quatsurf
