#pragma once

#include <span>
#include <vector>

#include "quatsurf/errors.hpp"
#include "quatsurf/grid.hpp"

namespace quatsurf {

// Finite-difference weights for the m-th derivative at z from samples at
// nodes x (Fornberg's recursion).
std::vector<double> fornberg_weights(double z, std::span<const double> x, int derivative);

// First-derivative operator on a uniform axis: centered stencils of the given
// even order in the interior and one-sided stencils of the same order and
// width near the ends.
class Differentiator {
public:
    explicit Differentiator(int order = 4);

    int order() const { return order_; }
    std::size_t width() const { return central_.size(); }

    // d/dx and d/dy of a node field sampled on grid.
    template <class T>
    std::vector<T> dx(const GridChart& grid, std::span<const T> f) const;
    template <class T>
    std::vector<T> dy(const GridChart& grid, std::span<const T> f) const;

    template <class T>
    std::vector<T> dx(const GridChart& grid, const std::vector<T>& f) const {
        return dx(grid, std::span<const T>(f));
    }
    template <class T>
    std::vector<T> dy(const GridChart& grid, const std::vector<T>& f) const {
        return dy(grid, std::span<const T>(f));
    }

    // Derivative of a 1-D sequence (stride `stride` starting at `offset`) written to out.
    template <class T>
    void apply_line(std::span<const T> f, std::size_t offset, std::size_t stride, std::size_t n, double h,
                    std::span<T> out) const;

private:
    int order_;
    std::vector<double> central_;
    // boundary_[k] holds the weights for node k from the left edge (k < half).
    std::vector<std::vector<double>> boundary_;
};

template <class T>
void Differentiator::apply_line(std::span<const T> f, std::size_t offset, std::size_t stride, std::size_t n,
                                double h, std::span<T> out) const {
    const std::size_t w = central_.size();
    const std::size_t half = w / 2;
    if (n < w) {
        throw ValidationError("stencil", "apply_line", "axis has fewer nodes than the stencil width");
    }
    const double inv_h = 1.0 / h;
    const auto at = [&](std::size_t k) -> const T& { return f[offset + k * stride]; };
    for (std::size_t k = 0; k < n; ++k) {
        T acc{};
        if (k >= half && k + half < n) {
            for (std::size_t m = 0; m < w; ++m) acc = acc + central_[m] * at(k - half + m);
        } else if (k < half) {
            const auto& c = boundary_[k];
            for (std::size_t m = 0; m < w; ++m) acc = acc + c[m] * at(m);
        } else {
            const auto& c = boundary_[n - 1 - k];
            for (std::size_t m = 0; m < w; ++m) acc = acc + (-c[m]) * at(n - 1 - m);
        }
        out[offset + k * stride] = inv_h * acc;
    }
}

template <class T>
std::vector<T> Differentiator::dx(const GridChart& grid, std::span<const T> f) const {
    std::vector<T> out(f.size());
    for (std::size_t j = 0; j < grid.ny; ++j) apply_line<T>(f, j * grid.nx, 1, grid.nx, grid.hx, out);
    return out;
}

template <class T>
std::vector<T> Differentiator::dy(const GridChart& grid, std::span<const T> f) const {
    std::vector<T> out(f.size());
    for (std::size_t i = 0; i < grid.nx; ++i) apply_line<T>(f, i, grid.nx, grid.ny, grid.hy, out);
    return out;
}

}  // namespace quatsurf
