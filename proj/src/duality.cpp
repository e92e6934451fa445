#include "quatsurf/duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "quatsurf/errors.hpp"
#include "quatsurf/fields.hpp"
#include "quatsurf/integrate.hpp"
#include "quatsurf/stencil.hpp"

namespace quatsurf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double form_dot(const FormValue& a, const FormValue& b) { return dot(a.ax, b.ax) + dot(a.ay, b.ay); }

double chart_extent(const GridChart& g) {
    return std::max(g.hx * static_cast<double>(g.nx - 1), g.hy * static_cast<double>(g.ny - 1));
}

double median(std::vector<double> v) {
    v.erase(std::remove_if(v.begin(), v.end(), [](double t) { return !std::isfinite(t); }), v.end());
    if (v.empty()) return kNaN;
    const auto mid = v.begin() + static_cast<long>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

}  // namespace

DualResult integrate_dual(const ChartImmersion& imm, const QuadDifferential& q, const DualOptions& options) {
    const GridChart& grid = imm.grid();
    if (!q.grid.same_layout(grid)) throw ValidationError("duality", "integrate_dual", "q and immersion grids differ");
    const double peak = q.max_abs();
    if (!(peak > 0.0)) throw ValidationError("duality", "integrate_dual", "trivial differential");

    const auto cr = cr_residual(q, imm.options().stencil_order);
    const double holomorphy = max_abs(cr) * chart_extent(grid) / peak;
    if (holomorphy > options.holomorphy_tol) {
        throw ValidationError("duality", "integrate_dual",
                              "q is not holomorphic (relative CR residual " + std::to_string(holomorphy) + ")");
    }

    DualResult out;
    out.q = q;
    out.basepoint = options.basepoint.value_or(0);
    if (out.basepoint >= grid.size()) throw ValidationError("duality", "integrate_dual", "basepoint outside grid");

    const QOneForm tau = form_from_qdiff(imm, q);
    out.closedness_residual = exterior_derivative(grid, tau.values, imm.options().stencil_order);
    {
        const Differentiator d(imm.options().stencil_order);
        std::vector<Quaternion> ax(tau.size()), ay(tau.size());
        for (std::size_t n = 0; n < tau.size(); ++n) {
            ax[n] = tau[n].ax;
            ay[n] = tau[n].ay;
        }
        std::vector<FormValue> grad_x(tau.size()), grad_y(tau.size());
        const auto axx = d.dx(grid, ax), axy = d.dy(grid, ax), ayx = d.dx(grid, ay), ayy = d.dy(grid, ay);
        for (std::size_t n = 0; n < tau.size(); ++n) {
            grad_x[n] = {axx[n], axy[n]};
            grad_y[n] = {ayx[n], ayy[n]};
        }
        const double den = std::hypot(l2(grad_x), l2(grad_y));
        out.closedness = relative(l2(out.closedness_residual), den);
    }
    if (out.closedness > options.closedness_tol) {
        throw NumericalError("duality", "integrate_dual",
                             "not isothermic for this q (closedness residual " + std::to_string(out.closedness) + ")");
    }

    auto field = integrate_form(grid, tau.values, out.basepoint, options.base_value);
    out.fstar = field.values;
    out.path_deviation = field.path_deviation;

    std::vector<Quaternion> tx(tau.size()), ty(tau.size());
    for (std::size_t n = 0; n < tau.size(); ++n) {
        tx[n] = tau[n].ax;
        ty[n] = tau[n].ay;
    }
    ImmersionOptions dual_options = imm.options();
    dual_options.allow_branch_points = true;
    out.immersion = ChartImmersion::from_frame(grid, std::move(field.values), std::move(tx), std::move(ty), dual_options);
    out.branch_nodes = out.immersion.branch_nodes();

    out.stretch.resize(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) {
        out.stretch[n] = std::abs(q.phi[n]) / std::exp(2.0 * imm.log_conformal_factor()[n]);
    }
    const double med = median(out.stretch);
    out.q.pole.assign(grid.size(), 0);
    for (std::size_t n = 0; n < grid.size(); ++n) {
        if (out.stretch[n] > options.pole_threshold * med) {
            out.q.pole[n] = 1;
            out.pole_nodes.push_back(n);
        }
    }
    out.Hstar = weingarten_split(out.immersion).H;
    return out;
}

DualityReport verify_duality(const ChartImmersion& imm, const DualResult& dual, const CurvatureData& curv) {
    const GridChart& grid = imm.grid();
    if (dual.fstar.size() != grid.size()) throw ValidationError("duality", "verify_duality", "dual/grid size mismatch");
    const Differentiator d(imm.options().stencil_order);
    const auto sx = d.dx(grid, dual.fstar);
    const auto sy = d.dy(grid, dual.fstar);

    const Quaternion nan{kNaN, kNaN, kNaN, kNaN};
    const std::size_t size = grid.size();
    std::vector<FormValue> classical(size), multiple_defect(size), omega(size), dn(size);
    std::vector<Quaternion> comm(size);
    std::vector<double> comm_scale(size), fit_dev(size), mult_dev(size), hstar(size);
    DualityReport r;
    r.hstar_fit.assign(size, kNaN);
    r.multiple.assign(size, kNaN);
    r.path_deviation = dual.path_deviation;

    for (std::size_t n = 0; n < size; ++n) {
        const FormValue dfs{sx[n], sy[n]};
        const double s2 = dfs.norm2();
        if (dual.immersion.is_branch(n) || imm.is_branch(n) || !(s2 > 0.0)) {
            classical[n] = multiple_defect[n] = {nan, nan};
            comm[n] = nan;
            comm_scale[n] = fit_dev[n] = mult_dev[n] = hstar[n] = kNaN;
            omega[n] = dn[n] = {nan, nan};
            continue;
        }
        const FormValue rhs = curv.dN[n] + curv.H[n] * imm.df(n);
        const double hfit = form_dot(rhs, dfs) / s2;
        r.hstar_fit[n] = hfit;
        classical[n] = rhs - hfit * dfs;

        const FormValue& w = curv.omega[n];
        comm[n] = wedge(dfs, w) - wedge(w, dfs);
        comm_scale[n] = std::sqrt(s2) * norm(w);
        const double a = form_dot(w, dfs) / s2;
        r.multiple[n] = a;
        multiple_defect[n] = w - a * dfs;

        hstar[n] = dual.Hstar[n];
        fit_dev[n] = hfit - dual.Hstar[n];
        mult_dev[n] = a - dual.Hstar[n];
        omega[n] = w;
        dn[n] = curv.dN[n];
        r.normal_flip = std::max(r.normal_flip, (dual.immersion.normal()[n] + imm.normal()[n]).norm());
    }
    r.classical = relative(l2(classical), l2(dn));
    r.commutator = relative(l2(comm), l2(comm_scale));
    r.real_multiple = relative(l2(multiple_defect), l2(omega));
    r.fit_vs_dual_H = relative(l2(fit_dev), l2(hstar));
    r.multiple_vs_dual_H = relative(l2(mult_dev), l2(hstar));
    return r;
}

std::string to_string(ChristoffelKind kind) {
    switch (kind) {
        case ChristoffelKind::dual_pair: return "dual_pair";
        case ChristoffelKind::scaling: return "scaling";
        case ChristoffelKind::unrelated: return "unrelated";
    }
    return "unrelated";
}

ChristoffelClassification classify_christoffel(const ChartImmersion& a, const ChartImmersion& b, double tol) {
    if (!a.grid().same_layout(b.grid())) {
        throw ValidationError("duality", "classify_christoffel", "immersions live on different grids");
    }
    const std::size_t size = a.grid().size();
    ChristoffelClassification c;
    std::vector<FormValue> conf(size), anti(size), dfb(size);
    std::vector<Complex> u(size);
    std::vector<double> ratio(size);
    const Quaternion nan{kNaN, kNaN, kNaN, kNaN};
    for (std::size_t n = 0; n < size; ++n) {
        if (a.is_branch(n) || b.is_branch(n)) {
            conf[n] = anti[n] = dfb[n] = {nan, nan};
            u[n] = {kNaN, kNaN};
            ratio[n] = kNaN;
            continue;
        }
        const Quaternion& na = a.normal()[n];
        c.normal_misalignment = std::max(c.normal_misalignment, cross(na, b.normal()[n]).norm());
        const FormValue db = b.df(n);
        const auto split = split_conformal(db, na);
        conf[n] = split.conformal;
        anti[n] = split.anticonformal;
        dfb[n] = db;
        u[n] = nu(db.ax * a.fx()[n].inverse(), na);
        ratio[n] = std::exp(b.log_conformal_factor()[n] - a.log_conformal_factor()[n]);
    }
    const double total = l2(dfb);
    c.conformal_fraction = relative(l2(conf), total);
    c.anticonformal_fraction = relative(l2(anti), total);

    Complex mean{0.0, 0.0};
    std::size_t count = 0;
    for (const auto& v : u) {
        if (std::isfinite(v.real()) && std::isfinite(v.imag())) {
            mean += v;
            ++count;
        }
    }
    if (count > 0) mean /= static_cast<double>(count);
    c.scale = mean;
    for (const auto& v : u) {
        if (std::isfinite(v.real()) && std::isfinite(v.imag())) {
            c.scale_spread = std::max(c.scale_spread, std::abs(v - mean));
        }
    }
    c.scale_spread = relative(c.scale_spread, std::abs(mean));
    const Stats rs = stats(ratio);
    c.metric_ratio_spread = relative(rs.stddev, rs.mean);

    if (c.normal_misalignment > tol) {
        c.kind = ChristoffelKind::unrelated;
    } else if (c.conformal_fraction < tol) {
        c.kind = ChristoffelKind::dual_pair;
        c.minimal_exception = c.metric_ratio_spread > tol;
    } else if (c.anticonformal_fraction < tol && c.scale_spread < tol && std::abs(mean.imag()) < tol * std::abs(mean)) {
        c.kind = ChristoffelKind::scaling;
    } else {
        c.kind = ChristoffelKind::unrelated;
    }
    return c;
}

}  // namespace quatsurf
