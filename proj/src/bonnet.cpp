#include "quatsurf/bonnet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "quatsurf/alignment.hpp"
#include "quatsurf/errors.hpp"
#include "quatsurf/fields.hpp"
#include "quatsurf/integrate.hpp"
#include "quatsurf/stencil.hpp"

namespace quatsurf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_size(const ChartImmersion& imm, std::size_t size, const char* op) {
    if (size != imm.grid().size()) throw ValidationError("bonnet", op, "field/grid size mismatch");
}

double chart_extent(const GridChart& g) {
    return std::max(g.hx * static_cast<double>(g.nx - 1), g.hy * static_cast<double>(g.ny - 1));
}

struct SpinDerivatives {
    std::vector<Quaternion> lx, ly;
};

SpinDerivatives differentiate(const ChartImmersion& imm, const SpinField& lam) {
    const Differentiator d(imm.options().stencil_order);
    return {d.dx(imm.grid(), lam.lambda), d.dy(imm.grid(), lam.lambda)};
}

// conj(lambda) df ^ d lambda at one node.
Quaternion closedness_form(const ChartImmersion& imm, const SpinField& lam, const SpinDerivatives& dl, std::size_t n) {
    const Quaternion lb = lam.lambda[n].conj();
    return lb * imm.fx()[n] * dl.ly[n] - lb * imm.fy()[n] * dl.lx[n];
}

}  // namespace

void SpinField::validate(double tol) const {
    double peak = 0.0;
    for (std::size_t n = 0; n < lambda.size(); ++n) {
        if (!lambda[n].is_finite()) throw ValidationError("bonnet", "spin_field", "non-finite lambda", n);
        peak = std::max(peak, lambda[n].norm());
    }
    for (std::size_t n = 0; n < lambda.size(); ++n) {
        if (!(lambda[n].norm() > tol * peak)) throw NumericalError("bonnet", "spin_field", "lambda vanishes", n);
    }
}

double SpinField::min_abs() const {
    double m = INFINITY;
    for (const auto& l : lambda) m = std::min(m, l.norm());
    return m;
}

std::vector<double> spin_closedness(const ChartImmersion& imm, const SpinField& lam) {
    require_size(imm, lam.lambda.size(), "spin_closedness");
    lam.validate();
    const auto dl = differentiate(imm, lam);
    std::vector<double> out(lam.lambda.size());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = closedness_form(imm, lam, dl, n).imag().norm();
    return out;
}

SpinResult spin_integrate(const ChartImmersion& imm, const SpinField& lam, const SpinOptions& options) {
    require_size(imm, lam.lambda.size(), "spin_integrate");
    lam.validate();
    const GridChart& grid = imm.grid();
    const std::size_t size = grid.size();
    const auto dl = differentiate(imm, lam);

    // |lambda| / extent keeps the scale meaningful where lambda is nearly constant.
    const double extent = std::max(grid.xmax() - grid.x0, grid.ymax() - grid.y0);
    std::vector<double> res(size), scale(size);
    std::vector<FormValue> frame(size);
    for (std::size_t n = 0; n < size; ++n) {
        const Quaternion& l = lam.lambda[n];
        const double d0 = l.norm() / extent;
        res[n] = closedness_form(imm, lam, dl, n).imag().norm();
        scale[n] = l.norm() * (imm.fx()[n].norm() * (dl.ly[n].norm() + d0) + imm.fy()[n].norm() * (dl.lx[n].norm() + d0));
        frame[n] = {l.conj() * imm.fx()[n] * l, l.conj() * imm.fy()[n] * l};
    }
    SpinResult out;
    out.closedness = relative(l2(res), l2(scale));
    if (out.closedness > options.closedness_tol) {
        throw NumericalError("bonnet", "spin_integrate",
                             "spin transform is not integrable (closedness " + std::to_string(out.closedness) + ")");
    }
    const std::size_t base = options.basepoint.value_or(0);
    if (base >= size) throw ValidationError("bonnet", "spin_integrate", "basepoint outside grid");
    auto field = integrate_form(grid, frame, base, options.base_value.value_or(imm.position()[base]));
    out.path_deviation = field.path_deviation;

    std::vector<Quaternion> fx(size), fy(size);
    for (std::size_t n = 0; n < size; ++n) {
        // The frame is pure algebra; drop the rounding-level real part.
        fx[n] = frame[n].ax.imag();
        fy[n] = frame[n].ay.imag();
    }
    for (auto& p : field.values) p = p.imag();
    out.immersion = ChartImmersion::from_frame(grid, std::move(field.values), std::move(fx), std::move(fy), imm.options());

    const auto It = first_fundamental_form(out.immersion);
    const auto I = first_fundamental_form(imm);
    double num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < size; ++n) {
        const double l4 = std::pow(lam.lambda[n].norm2(), 2);
        num += std::pow(It[n].E - l4 * I[n].E, 2) + 2.0 * std::pow(It[n].F - l4 * I[n].F, 2) +
               std::pow(It[n].G - l4 * I[n].G, 2);
        den += It[n].E * It[n].E + 2.0 * It[n].F * It[n].F + It[n].G * It[n].G;
    }
    out.metric_residual = relative(std::sqrt(num), std::sqrt(den));
    return out;
}

std::vector<Metric> first_fundamental_form(const ChartImmersion& imm) {
    std::vector<Metric> out(imm.grid().size());
    for (std::size_t n = 0; n < out.size(); ++n) {
        const Quaternion& fx = imm.fx()[n];
        const Quaternion& fy = imm.fy()[n];
        out[n] = {dot(fx, fx), dot(fx, fy), dot(fy, fy)};
    }
    return out;
}

BonnetPair bonnet_pair(const ChartImmersion& imm, const DualResult& dual, double eps, const BonnetOptions& options) {
    require_size(imm, dual.fstar.size(), "bonnet_pair");
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw ValidationError("bonnet", "bonnet_pair", "eps must be non-negative");
    const GridChart& grid = imm.grid();
    const std::size_t size = grid.size();

    BonnetPair p;
    p.eps = eps;
    p.lambda_plus.lambda.resize(size);
    p.lambda_minus.lambda.resize(size);
    double peak = 0.0;
    for (std::size_t n = 0; n < size; ++n) {
        p.lambda_plus.lambda[n] = dual.fstar[n] + eps;
        p.lambda_minus.lambda[n] = dual.fstar[n] - eps;
        peak = std::max(peak, p.lambda_plus.lambda[n].norm());
    }
    for (std::size_t n = 0; n < size; ++n) {
        if (!(p.lambda_minus.lambda[n].norm() > 1e-12 * peak)) {
            throw NumericalError("bonnet", "bonnet_pair", "eps on the singular sphere: lambda vanishes", n);
        }
        p.lambda_norm_gap =
            std::max(p.lambda_norm_gap, std::abs(p.lambda_plus.lambda[n].norm() - p.lambda_minus.lambda[n].norm()));
    }

    SpinOptions so;
    so.basepoint = options.basepoint;
    so.closedness_tol = options.closedness_tol;
    p.fplus = spin_integrate(imm, p.lambda_plus, so).immersion;
    p.fminus = spin_integrate(imm, p.lambda_minus, so).immersion;
    p.curv_plus = weingarten_split(p.fplus);
    p.curv_minus = weingarten_split(p.fminus);
    p.Hplus = p.curv_plus.H;
    p.Hminus = p.curv_minus.H;
    p.Iplus = first_fundamental_form(p.fplus);
    p.Iminus = first_fundamental_form(p.fminus);

    double num = 0.0, den = 0.0, hmax = 0.0;
    p.D.grid = grid;
    p.D.phi.resize(size);
    for (std::size_t n = 0; n < size; ++n) {
        const Metric& a = p.Iplus[n];
        const Metric& b = p.Iminus[n];
        num += std::pow(a.E - b.E, 2) + 2.0 * std::pow(a.F - b.F, 2) + std::pow(a.G - b.G, 2);
        den += a.E * a.E + 2.0 * a.F * a.F + a.G * a.G;
        if (std::isfinite(p.Hplus[n]) && std::isfinite(p.Hminus[n])) {
            p.H_difference = std::max(p.H_difference, std::abs(p.Hplus[n] - p.Hminus[n]));
            hmax = std::max(hmax, std::abs(p.Hplus[n]));
        }
        p.D.phi[n] = p.curv_plus.hopf_qd[n] - p.curv_minus.hopf_qd[n];

        const Quaternion& N = imm.normal()[n];
        for (const auto* side : {&p.lambda_plus, &p.lambda_minus}) {
            const Quaternion& l = side->lambda[n];
            const Quaternion& Ns = (side == &p.lambda_plus ? p.fplus : p.fminus).normal()[n];
            p.normal_recovery = std::max(p.normal_recovery, (N - l * Ns * l.inverse()).norm());
        }
    }
    p.metric_residual = relative(std::sqrt(num), std::sqrt(den));
    p.H_relative = relative(p.H_difference, hmax);
    p.D_cr_residual = relative(l2(cr_residual(p.D, imm.options().stencil_order)) * chart_extent(grid), l2(p.D.phi));

    const auto fit = rigid_align(p.fplus.position(), p.fminus.position());
    p.congruence_rms = fit.rms;
    p.diameter = std::max(p.fplus.diameter(), p.fminus.diameter());
    p.congruent = !(fit.rms > options.congruence_tol * p.diameter);
    return p;
}

double shape_distortion_check(const ChartImmersion& imm, const DualResult& dual, const BonnetPair& pair,
                              const QuadDifferential& D) {
    const QOneForm tau = form_from_qdiff(imm, D);
    std::vector<FormValue> diff(tau.size()), rhs(tau.size());
    for (std::size_t n = 0; n < tau.size(); ++n) {
        rhs[n] = 4.0 * pair.eps * star(dual.immersion.df(n));
        diff[n] = tau[n] - rhs[n];
    }
    return relative(l2(diff), l2(rhs));
}

double shape_distortion_check(const ChartImmersion& imm, const DualResult& dual, const BonnetPair& pair) {
    return shape_distortion_check(imm, dual, pair, pair.D);
}

CorrespondenceReport umbilic_branch_correspondence(const BonnetPair& pair, const DualResult& dual, double tol) {
    CorrespondenceReport r;
    r.umbilics_plus = umbilics(pair.curv_plus, tol);
    r.umbilics_minus = umbilics(pair.curv_minus, tol);
    r.distortion_zeros = zero_locus(pair.D, tol).nodes;
    r.branch_nodes = dual.branch_nodes;
    std::sort(r.branch_nodes.begin(), r.branch_nodes.end());
    r.coincide = r.umbilics_plus == r.branch_nodes && r.umbilics_minus == r.branch_nodes &&
                 r.distortion_zeros == r.branch_nodes;
    return r;
}

std::vector<double> gauge_check(const ChartImmersion& imm, const SpinField& lam, const std::vector<FormValue>& tau_tilde,
                                double tol) {
    require_size(imm, lam.lambda.size(), "gauge_check");
    require_size(imm, tau_tilde.size(), "gauge_check");
    lam.validate();
    std::vector<double> out(tau_tilde.size(), kNaN);
    for (std::size_t n = 0; n < out.size(); ++n) {
        if (imm.is_branch(n)) continue;
        const Quaternion& l = lam.lambda[n];
        const Quaternion& N = imm.normal()[n];
        const Quaternion nt = l.inverse() * N * l;
        const FormValue& t = tau_tilde[n];
        if (anticonformality_defect(t, nt) > tol || transversal_fraction(t, nt) > tol) {
            throw ValidationError("bonnet", "gauge_check", "form is not anti-conformal and tangential", n);
        }
        const Quaternion ftx = l.conj() * imm.fx()[n] * l;
        const FormValue lhs = df_solve(imm.fx()[n], N, nu(ftx * t.ax, nt));
        const FormValue rhs = l * t * l.conj();
        out[n] = relative(norm(lhs - rhs), norm(rhs));
    }
    return out;
}

CmcEpsResult cmc_eps_uniqueness(const GridChart& grid, const std::vector<double>& H, const std::vector<double>& g,
                                double tol, int stencil_order) {
    if (H.size() != grid.size() || g.size() != grid.size()) {
        throw ValidationError("bonnet", "cmc_eps_uniqueness", "field/grid size mismatch");
    }
    const Differentiator d(stencil_order);
    const auto hx = d.dx(grid, H), hy = d.dy(grid, H), gx = d.dx(grid, g), gy = d.dy(grid, g);
    double hg = 0.0, gg = 0.0, hh = 0.0;
    for (std::size_t n = 0; n < H.size(); ++n) {
        if (!std::isfinite(hx[n] + hy[n] + gx[n] + gy[n])) continue;
        hg += hx[n] * gx[n] + hy[n] * gy[n];
        gg += gx[n] * gx[n] + gy[n] * gy[n];
        hh += hx[n] * hx[n] + hy[n] * hy[n];
    }
    CmcEpsResult r;
    r.flat = !(std::sqrt(hh) * chart_extent(grid) > tol * l2(H));
    if (r.flat || !(gg > 0.0)) return r;
    r.c = hg / gg;
    double miss = 0.0;
    for (std::size_t n = 0; n < H.size(); ++n) {
        if (!std::isfinite(hx[n] + hy[n] + gx[n] + gy[n])) continue;
        miss += std::pow(hx[n] - r.c * gx[n], 2) + std::pow(hy[n] - r.c * gy[n], 2);
    }
    r.misfit = std::sqrt(miss / hh);
    if (r.misfit > tol || !(r.c > 0.0)) return r;

    std::vector<double> e2(H.size());
    for (std::size_t n = 0; n < H.size(); ++n) e2[n] = H[n] / r.c - g[n];
    const Stats s = stats(e2);
    r.spread = relative(s.max - s.min, std::abs(s.mean));
    if (s.mean > 0.0 && r.spread < tol) r.eps = std::sqrt(s.mean);
    return r;
}

CmcEpsResult cmc_eps_uniqueness(const ChartImmersion& imm, const DualResult& dual, double tol) {
    require_size(imm, dual.fstar.size(), "cmc_eps_uniqueness");
    const CurvatureData curv = weingarten_split(imm);
    double hmax = 0.0, kmax = 0.0;
    for (const auto& [k1, k2] : principal_curvatures(curv)) {
        if (std::isfinite(k1)) kmax = std::max({kmax, std::abs(k1), std::abs(k2)});
    }
    for (double h : curv.H) {
        if (std::isfinite(h)) hmax = std::max(hmax, std::abs(h));
    }
    if (!(hmax > tol * kmax)) {
        throw ValidationError("bonnet", "cmc_eps_uniqueness", "immersion is minimal; the criterion needs H != 0");
    }
    std::vector<double> g(dual.fstar.size());
    for (std::size_t n = 0; n < g.size(); ++n) g[n] = dual.fstar[n].norm2();
    return cmc_eps_uniqueness(imm.grid(), curv.H, g, tol, imm.options().stencil_order);
}

}  // namespace quatsurf
