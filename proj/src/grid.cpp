#include "quatsurf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quatsurf/errors.hpp"

namespace quatsurf {

GridChart GridChart::span(double xmin, double xmax, std::size_t nx, double ymin, double ymax, std::size_t ny) {
    GridChart g;
    g.nx = nx;
    g.ny = ny;
    g.x0 = xmin;
    g.y0 = ymin;
    g.hx = nx > 1 ? (xmax - xmin) / static_cast<double>(nx - 1) : 0.0;
    g.hy = ny > 1 ? (ymax - ymin) / static_cast<double>(ny - 1) : 0.0;
    return g;
}

void GridChart::validate() const {
    if (nx < 5 || ny < 5) {
        throw ValidationError("grid", "validate",
                              "grid needs at least 5 nodes per axis, got " + std::to_string(nx) + "x" +
                                  std::to_string(ny));
    }
    if (!(hx > 0.0) || !(hy > 0.0) || !std::isfinite(hx) || !std::isfinite(hy)) {
        throw ValidationError("grid", "validate", "grid spacings must be positive and finite");
    }
    if (!std::isfinite(x0) || !std::isfinite(y0)) {
        throw ValidationError("grid", "validate", "grid origin must be finite");
    }
}

std::size_t GridChart::nearest(double px, double py) const {
    const auto clamp_axis = [](double v, double origin, double h, std::size_t n) {
        const double t = std::round((v - origin) / h);
        return static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(n - 1)));
    };
    return index(clamp_axis(px, x0, hx, nx), clamp_axis(py, y0, hy, ny));
}

GridChart GridChart::refined() const {
    GridChart g = *this;
    g.nx = 2 * (nx - 1) + 1;
    g.ny = 2 * (ny - 1) + 1;
    g.hx = hx / 2.0;
    g.hy = hy / 2.0;
    return g;
}

GridChart GridChart::rows(std::size_t row_begin, std::size_t row_end) const {
    if (row_begin >= row_end || row_end > ny) {
        throw ValidationError("grid", "rows", "invalid row range");
    }
    GridChart g = *this;
    g.ny = row_end - row_begin;
    g.y0 = y(row_begin);
    return g;
}

GridChart GridChart::block(std::size_t col_begin, std::size_t col_end, std::size_t row_begin,
                           std::size_t row_end) const {
    if (col_begin >= col_end || col_end > nx) throw ValidationError("grid", "block", "invalid column range");
    GridChart g = rows(row_begin, row_end);
    g.nx = col_end - col_begin;
    g.x0 = x(col_begin);
    return g;
}

bool GridChart::same_layout(const GridChart& o, double tol) const {
    const double scale = std::max({std::abs(hx), std::abs(hy), 1.0});
    return nx == o.nx && ny == o.ny && std::abs(hx - o.hx) <= tol * scale && std::abs(hy - o.hy) <= tol * scale &&
           std::abs(x0 - o.x0) <= tol * scale && std::abs(y0 - o.y0) <= tol * scale;
}

}  // namespace quatsurf
