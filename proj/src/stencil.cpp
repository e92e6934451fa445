#include "quatsurf/stencil.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "quatsurf/errors.hpp"

namespace quatsurf {

std::vector<double> fornberg_weights(double z, std::span<const double> x, int derivative) {
    const std::size_t n = x.size();
    const auto m = static_cast<std::size_t>(derivative);
    // c[i][k]: weight of node i for derivative order k.
    std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - z;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - z;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k) {
                    c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k) {
                c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = c[i][m];
    return out;
}

Differentiator::Differentiator(int order) : order_(order) {
    if (order < 2 || order > 12 || order % 2 != 0) {
        throw ValidationError("stencil", "Differentiator", "stencil order must be even and in [2, 12], got " +
                                                               std::to_string(order));
    }
    const std::size_t w = static_cast<std::size_t>(order) + 1;
    std::vector<double> nodes(w);
    std::iota(nodes.begin(), nodes.end(), 0.0);
    const std::size_t half = w / 2;
    central_ = fornberg_weights(static_cast<double>(half), nodes, 1);
    boundary_.resize(half);
    for (std::size_t k = 0; k < half; ++k) boundary_[k] = fornberg_weights(static_cast<double>(k), nodes, 1);
}

}  // namespace quatsurf
