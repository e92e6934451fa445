#include "quatsurf/qdiff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "quatsurf/errors.hpp"
#include "quatsurf/stencil.hpp"

namespace quatsurf {

namespace {

constexpr double kPi = std::numbers::pi;

void require_same_grid(const GridChart& a, const GridChart& b, const char* op) {
    if (!a.same_layout(b)) throw ValidationError("qdiff", op, "differential and immersion live on different grids");
}

}  // namespace

QuadDifferential QuadDifferential::sample(const GridChart& grid, const std::function<Complex(Complex)>& fn) {
    QuadDifferential q;
    q.grid = grid;
    q.phi.resize(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) q.phi[n] = fn(grid.point(n));
    return q;
}

QuadDifferential QuadDifferential::constant(const GridChart& grid, Complex value) {
    return sample(grid, [value](Complex) { return value; });
}

NodeList QuadDifferential::pole_nodes() const {
    NodeList out;
    for (std::size_t n = 0; n < pole.size(); ++n) {
        if (pole[n]) out.push_back(n);
    }
    return out;
}

double QuadDifferential::max_abs() const {
    double m = 0.0;
    for (std::size_t n = 0; n < phi.size(); ++n) {
        if (!is_pole(n) && std::isfinite(std::abs(phi[n]))) m = std::max(m, std::abs(phi[n]));
    }
    return m;
}

QuadDifferential operator*(double s, const QuadDifferential& q) {
    QuadDifferential out = q;
    for (auto& v : out.phi) v *= s;
    return out;
}

QuadDifferential operator-(const QuadDifferential& a, const QuadDifferential& b) {
    QuadDifferential out = a;
    for (std::size_t n = 0; n < out.phi.size(); ++n) out.phi[n] -= b.phi[n];
    return out;
}

void flag_poles(QuadDifferential& q, double threshold) {
    std::vector<double> mags;
    mags.reserve(q.phi.size());
    for (const auto& v : q.phi) mags.push_back(std::isfinite(std::abs(v)) ? std::abs(v) : INFINITY);
    std::vector<double> sorted = mags;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2), sorted.end());
    const double median = sorted[sorted.size() / 2];
    q.pole.assign(q.phi.size(), 0);
    for (std::size_t n = 0; n < mags.size(); ++n) {
        if (mags[n] > threshold * median) q.pole[n] = 1;
    }
}

ChartCurve ChartCurve::row(const GridChart& grid, std::size_t j) {
    if (j >= grid.ny) throw ValidationError("qdiff", "curve", "row outside grid");
    ChartCurve c;
    for (std::size_t i = 0; i < grid.nx; ++i) {
        c.points.emplace_back(grid.x(i), grid.y(j));
        c.tangents.emplace_back(1.0, 0.0);
    }
    return c;
}

ChartCurve ChartCurve::segment(Complex a, Complex b, std::size_t samples) {
    if (samples < 2) throw ValidationError("qdiff", "curve", "segment needs at least two samples");
    ChartCurve c;
    const Complex t = b - a;
    for (std::size_t k = 0; k < samples; ++k) {
        c.points.push_back(a + t * (static_cast<double>(k) / static_cast<double>(samples - 1)));
        c.tangents.push_back(t / std::abs(t));
    }
    return c;
}

void ChartCurve::validate() const {
    if (points.size() != tangents.size() || points.empty()) {
        throw ValidationError("qdiff", "curve", "points and tangents must be non-empty and of equal length");
    }
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (!(std::abs(tangents[k]) > 0.0)) throw ValidationError("qdiff", "curve", "vanishing tangent", k);
        if (k > 0 && points[k] == points[k - 1]) throw ValidationError("qdiff", "curve", "repeated point", k);
    }
}

std::vector<double> cr_residual(const QuadDifferential& q, int stencil_order) {
    const Differentiator d(stencil_order);
    const auto px = d.dx(q.grid, q.phi);
    const auto py = d.dy(q.grid, q.phi);
    std::vector<double> out(q.phi.size());
    for (std::size_t n = 0; n < out.size(); ++n) {
        out[n] = 0.5 * std::abs(px[n] + Complex{0.0, 1.0} * py[n]);
    }
    return out;
}

ZeroLocus zero_locus(const QuadDifferential& q, double tol) {
    const GridChart& g = q.grid;
    const double peak = q.max_abs();
    if (!(peak > 0.0)) throw ValidationError("qdiff", "zero_locus", "trivial differential");
    const double level = tol * peak;

    std::vector<char> below(q.phi.size(), 0);
    for (std::size_t n = 0; n < below.size(); ++n) below[n] = !q.is_pole(n) && std::abs(q.phi[n]) < level;

    ZeroLocus out;
    std::vector<char> seen(below.size(), 0);
    for (std::size_t start = 0; start < below.size(); ++start) {
        if (!below[start] || seen[start]) continue;
        NodeList cluster{start};
        seen[start] = 1;
        for (std::size_t k = 0; k < cluster.size(); ++k) {
            const long ci = static_cast<long>(g.col(cluster[k]));
            const long cj = static_cast<long>(g.row(cluster[k]));
            for (long dj = -1; dj <= 1; ++dj) {
                for (long di = -1; di <= 1; ++di) {
                    const long ii = ci + di;
                    const long jj = cj + dj;
                    if (ii < 0 || jj < 0 || ii >= static_cast<long>(g.nx) || jj >= static_cast<long>(g.ny)) continue;
                    const std::size_t m = g.index(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj));
                    if (below[m] && !seen[m]) {
                        seen[m] = 1;
                        cluster.push_back(m);
                    }
                }
            }
        }

        std::size_t best = cluster.front();
        long imin = static_cast<long>(g.nx), imax = -1, jmin = static_cast<long>(g.ny), jmax = -1;
        for (std::size_t m : cluster) {
            if (std::abs(q.phi[m]) < std::abs(q.phi[best])) best = m;
            imin = std::min(imin, static_cast<long>(g.col(m)));
            imax = std::max(imax, static_cast<long>(g.col(m)));
            jmin = std::min(jmin, static_cast<long>(g.row(m)));
            jmax = std::max(jmax, static_cast<long>(g.row(m)));
        }

        Zero z;
        z.node = best;
        z.point = g.point(best);
        --imin, --jmin, ++imax, ++jmax;
        if (imin >= 0 && jmin >= 0 && imax < static_cast<long>(g.nx) && jmax < static_cast<long>(g.ny)) {
            // Counter-clockwise ring around the cluster's bounding box.
            std::vector<std::size_t> ring;
            const auto at = [&](long i, long j) { return g.index(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); };
            for (long i = imin; i < imax; ++i) ring.push_back(at(i, jmin));
            for (long j = jmin; j < jmax; ++j) ring.push_back(at(imax, j));
            for (long i = imax; i > imin; --i) ring.push_back(at(i, jmax));
            for (long j = jmax; j > jmin; --j) ring.push_back(at(imin, j));
            double turn = 0.0;
            for (std::size_t k = 0; k < ring.size(); ++k) {
                const Complex a = q.phi[ring[k]];
                const Complex b = q.phi[ring[(k + 1) % ring.size()]];
                turn += std::arg(b / a);
            }
            z.multiplicity = static_cast<int>(std::lround(turn / (2.0 * kPi)));
        }
        const bool small = cluster.size() * 100 <= g.size();
        if (z.multiplicity == 0 || !small) out.isolated = false;
        out.nodes.push_back(best);
        out.zeros.push_back(z);
    }
    std::sort(out.nodes.begin(), out.nodes.end());
    return out;
}

double horizontal_angle(Complex phi) {
    if (std::abs(phi) == 0.0 || !std::isfinite(std::abs(phi))) {
        throw ValidationError("qdiff", "stretch_directions", "stretch directions undefined at a zero of q");
    }
    return -0.5 * std::arg(phi);
}

StretchDirections stretch_directions(const QuadDifferential& q) {
    StretchDirections out;
    out.horizontal.resize(q.phi.size());
    out.vertical.resize(q.phi.size());
    for (std::size_t n = 0; n < q.phi.size(); ++n) {
        if (std::abs(q.phi[n]) == 0.0) {
            throw ValidationError("qdiff", "stretch_directions", "stretch directions undefined at a zero of q", n);
        }
        const Complex h = std::polar(1.0, horizontal_angle(q.phi[n]));
        out.horizontal[n] = h;
        out.vertical[n] = Complex{0.0, 1.0} * h;
    }
    return out;
}

NoncharacteristicReport noncharacteristic(const ChartCurve& curve, const QuadDifferential& q,
                                          const ChartImmersion& imm, double min_margin_deg, double zero_tol) {
    curve.validate();
    require_same_grid(q.grid, imm.grid(), "noncharacteristic");
    const double level = zero_tol * q.max_abs();
    NoncharacteristicReport r;
    r.margin_deg = 90.0;
    for (std::size_t k = 0; k < curve.points.size(); ++k) {
        const std::size_t node = q.grid.nearest(curve.points[k].real(), curve.points[k].imag());
        const Complex phi = q.phi[node];
        if (!(std::abs(phi) > level)) {
            r.meets_zero_locus = true;
            r.margin_deg = 0.0;
            r.worst_sample = k;
            break;
        }
        const double d = std::abs(std::remainder(std::arg(curve.tangents[k]) - horizontal_angle(phi), kPi));
        const double margin = std::min(d, 0.5 * kPi - d) * 180.0 / kPi;
        if (margin < r.margin_deg) {
            r.margin_deg = margin;
            r.worst_sample = k;
        }
    }
    r.noncharacteristic = !r.meets_zero_locus && r.margin_deg > min_margin_deg;
    return r;
}

QOneForm form_from_qdiff(const ChartImmersion& imm, const QuadDifferential& q) {
    require_same_grid(q.grid, imm.grid(), "form_from_qdiff");
    QOneForm tau;
    tau.kind = FormKind::anticonformal;
    tau.tangential = true;
    tau.values.resize(q.phi.size());
    for (std::size_t n = 0; n < q.phi.size(); ++n) {
        if (imm.is_branch(n)) throw NumericalError("qdiff", "form_from_qdiff", "degenerate frame", n);
        tau[n] = df_solve(imm.fx()[n], imm.normal()[n], q.phi[n]);
    }
    return tau;
}

QuadDifferential qdiff_from_form(const ChartImmersion& imm, const QOneForm& tau, double tol) {
    if (tau.size() != imm.grid().size()) throw ValidationError("qdiff", "qdiff_from_form", "form/grid size mismatch");
    QuadDifferential q;
    q.grid = imm.grid();
    q.phi.resize(tau.size());
    for (std::size_t n = 0; n < tau.size(); ++n) {
        const Quaternion& N = imm.normal()[n];
        if (anticonformality_defect(tau[n], N) > tol || transversal_fraction(tau[n], N) > tol) {
            throw ValidationError("qdiff", "qdiff_from_form", "form is not anti-conformal and tangential", n);
        }
        q.phi[n] = nu(imm.fx()[n] * tau[n].ax, N);
    }
    return q;
}

std::vector<Quaternion> exterior_derivative(const GridChart& grid, const std::vector<FormValue>& tau,
                                            int stencil_order) {
    const Differentiator d(stencil_order);
    std::vector<Quaternion> ax(tau.size()), ay(tau.size());
    for (std::size_t n = 0; n < tau.size(); ++n) {
        ax[n] = tau[n].ax;
        ay[n] = tau[n].ay;
    }
    const auto day = d.dx(grid, ay);
    const auto dax = d.dy(grid, ax);
    std::vector<Quaternion> out(tau.size());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = day[n] - dax[n];
    return out;
}

std::vector<double> normal_curl(const ChartImmersion& imm, const QOneForm& tau) {
    const auto c = exterior_derivative(imm.grid(), tau.values, imm.options().stencil_order);
    std::vector<double> out(c.size());
    for (std::size_t n = 0; n < c.size(); ++n) {
        const Quaternion& N = imm.normal()[n];
        out[n] = (0.5 * (c[n] - N * c[n] * N)).norm();
    }
    return out;
}

}  // namespace quatsurf
