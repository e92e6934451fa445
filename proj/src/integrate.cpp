#include "quatsurf/integrate.hpp"

#include <algorithm>

#include "quatsurf/errors.hpp"

namespace quatsurf {

std::vector<Quaternion> cumulative_integral(std::span<const Quaternion> g, double h) {
    const std::size_t n = g.size();
    if (n < 4) throw ValidationError("integrate", "cumulative_integral", "need at least 4 samples per line");
    std::vector<Quaternion> out(n);
    const double c = h / 24.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        Quaternion step;
        if (k == 0) {
            step = c * (9.0 * g[0] + 19.0 * g[1] - 5.0 * g[2] + g[3]);
        } else if (k + 2 == n) {
            step = c * (g[n - 4] - 5.0 * g[n - 3] + 19.0 * g[n - 2] + 9.0 * g[n - 1]);
        } else {
            step = c * (-1.0 * g[k - 1] + 13.0 * g[k] + 13.0 * g[k + 1] - g[k + 2]);
        }
        out[k + 1] = out[k] + step;
    }
    return out;
}

IntegratedField integrate_form(const GridChart& grid, std::span<const FormValue> form, std::size_t basepoint,
                               const Quaternion& base_value) {
    grid.validate();
    if (form.size() != grid.size()) throw ValidationError("integrate", "integrate_form", "form/grid size mismatch");
    if (basepoint >= grid.size()) throw ValidationError("integrate", "integrate_form", "basepoint outside grid");
    const std::size_t nx = grid.nx;
    const std::size_t ny = grid.ny;

    std::vector<Quaternion> line_x(nx), line_y(ny);
    std::vector<Quaternion> fxy(grid.size()), fyx(grid.size());

    // x along row 0, then columns in y.
    for (std::size_t i = 0; i < nx; ++i) line_x[i] = form[grid.index(i, 0)].ax;
    const auto row0 = cumulative_integral(line_x, grid.hx);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) line_y[j] = form[grid.index(i, j)].ay;
        const auto col = cumulative_integral(line_y, grid.hy);
        for (std::size_t j = 0; j < ny; ++j) fxy[grid.index(i, j)] = row0[i] + col[j];
    }
    // y along column 0, then rows in x.
    for (std::size_t j = 0; j < ny; ++j) line_y[j] = form[grid.index(0, j)].ay;
    const auto col0 = cumulative_integral(line_y, grid.hy);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) line_x[i] = form[grid.index(i, j)].ax;
        const auto row = cumulative_integral(line_x, grid.hx);
        for (std::size_t i = 0; i < nx; ++i) fyx[grid.index(i, j)] = col0[j] + row[i];
    }

    IntegratedField out;
    out.values.resize(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) {
        out.values[n] = 0.5 * (fxy[n] + fyx[n]);
        out.path_deviation = std::max(out.path_deviation, (fxy[n] - fyx[n]).norm());
    }
    const Quaternion shift = base_value - out.values[basepoint];
    for (auto& v : out.values) v += shift;
    return out;
}

}  // namespace quatsurf
