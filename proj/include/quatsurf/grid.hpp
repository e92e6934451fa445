#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "quatsurf/quaternion.hpp"

namespace quatsurf {

using Complex = std::complex<double>;

// Uniform rectangular sample of an isothermal chart z = x + iy.
// Nodes are stored row-major: index = j * nx + i, with i along x and j along y.
struct GridChart {
    std::size_t nx = 0;
    std::size_t ny = 0;
    double hx = 0.0;
    double hy = 0.0;
    double x0 = 0.0;
    double y0 = 0.0;

    // Grid spanning [xmin, xmax] x [ymin, ymax] with the given node counts.
    static GridChart span(double xmin, double xmax, std::size_t nx, double ymin, double ymax, std::size_t ny);

    // Throws ValidationError unless nx, ny >= 5 and hx, hy > 0.
    void validate() const;

    std::size_t size() const { return nx * ny; }
    std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }
    std::size_t col(std::size_t node) const { return node % nx; }
    std::size_t row(std::size_t node) const { return node / nx; }
    double x(std::size_t i) const { return x0 + static_cast<double>(i) * hx; }
    double y(std::size_t j) const { return y0 + static_cast<double>(j) * hy; }
    double xmax() const { return x(nx - 1); }
    double ymax() const { return y(ny - 1); }
    Complex point(std::size_t node) const { return {x(col(node)), y(row(node))}; }

    // Node nearest to a chart point (clamped to the grid).
    std::size_t nearest(double px, double py) const;

    // Same node layout, spacing halved: (n - 1) * 2 + 1 nodes per axis.
    GridChart refined() const;

    // Rows [row_begin, row_end) as a grid of their own.
    GridChart rows(std::size_t row_begin, std::size_t row_end) const;

    // Columns [col_begin, col_end) of rows [row_begin, row_end).
    GridChart block(std::size_t col_begin, std::size_t col_end, std::size_t row_begin, std::size_t row_end) const;

    bool same_layout(const GridChart& other, double tol = 1e-12) const;
};

using NodeList = std::vector<std::size_t>;

}  // namespace quatsurf
