#pragma once

#include <span>
#include <vector>

#include "quatsurf/forms.hpp"
#include "quatsurf/grid.hpp"

namespace quatsurf {

struct IntegratedField {
    std::vector<Quaternion> values;
    // max |F_xy - F_yx| over nodes, where F_xy integrates along the first row
    // then up the columns and F_yx along the first column then across the rows.
    double path_deviation = 0.0;
};

// Integrates a (closed) quaternion one-form along grid lines so that
// F(basepoint) = base_value.  Each grid-line segment uses the fourth-order
// rule obtained by integrating the local cubic interpolant of the samples.
// The returned field is the average of the two path orders.
IntegratedField integrate_form(const GridChart& grid, std::span<const FormValue> form, std::size_t basepoint,
                               const Quaternion& base_value);

// Cumulative integral of samples g on a uniform line, I[0] = 0.
std::vector<Quaternion> cumulative_integral(std::span<const Quaternion> g, double h);

}  // namespace quatsurf
