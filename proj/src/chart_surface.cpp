#include "quatsurf/chart_surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "quatsurf/errors.hpp"
#include "quatsurf/fields.hpp"
#include "quatsurf/stencil.hpp"

namespace quatsurf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_samples(const GridChart& grid, const std::vector<Quaternion>& f, const char* op) {
    grid.validate();
    if (f.size() != grid.size()) {
        throw ValidationError("chartsurf", op,
                              "expected " + std::to_string(grid.size()) + " samples, got " + std::to_string(f.size()));
    }
    for (std::size_t n = 0; n < f.size(); ++n) {
        if (!f[n].is_finite()) throw ValidationError("chartsurf", op, "non-finite sample", n);
    }
}

}  // namespace

ChartImmersion ChartImmersion::from_samples(const GridChart& grid, std::vector<Quaternion> positions,
                                            const ImmersionOptions& options) {
    check_samples(grid, positions, "build_immersion");
    const Differentiator d(options.stencil_order);
    ChartImmersion imm;
    imm.grid_ = grid;
    imm.options_ = options;
    imm.f_ = std::move(positions);
    imm.fx_ = d.dx(grid, imm.f_);
    imm.fy_ = d.dy(grid, imm.f_);
    imm.finish();
    return imm;
}

ChartImmersion ChartImmersion::from_frame(const GridChart& grid, std::vector<Quaternion> positions,
                                          std::vector<Quaternion> fx, std::vector<Quaternion> fy,
                                          const ImmersionOptions& options) {
    check_samples(grid, positions, "from_frame");
    if (fx.size() != grid.size() || fy.size() != grid.size()) {
        throw ValidationError("chartsurf", "from_frame", "frame/grid size mismatch");
    }
    ChartImmersion imm;
    imm.grid_ = grid;
    imm.options_ = options;
    imm.f_ = std::move(positions);
    imm.fx_ = std::move(fx);
    imm.fy_ = std::move(fy);
    imm.finish();
    return imm;
}

void ChartImmersion::finish() {
    const std::size_t size = grid_.size();
    n_.assign(size, Quaternion{});
    u_.assign(size, kNaN);
    conformality_.assign(size, 0.0);
    branch_mask_.assign(size, 0);
    branch_.clear();
    max_conformality_ = 0.0;

    double scale = 0.0;
    for (std::size_t n = 0; n < size; ++n) {
        if (!fx_[n].is_finite() || !fy_[n].is_finite()) {
            throw NumericalError("chartsurf", "build_immersion", "non-finite frame", n);
        }
        scale = std::max(scale, fx_[n].norm() * fy_[n].norm());
    }
    if (!(scale > 0.0)) throw NumericalError("chartsurf", "build_immersion", "frame vanishes identically");

    for (std::size_t n = 0; n < size; ++n) {
        const Quaternion c = cross(fx_[n], fy_[n]);
        const double a = c.norm();
        if (a <= options_.degeneracy_tol * scale) {
            if (!options_.allow_branch_points) {
                throw NumericalError("chartsurf", "build_immersion", "degenerate frame", n);
            }
            branch_mask_[n] = 1;
            branch_.push_back(n);
            continue;
        }
        n_[n] = c / a;
        const double lx = fx_[n].norm();
        const double ly = fy_[n].norm();
        const double e2u = lx * ly;
        u_[n] = 0.5 * std::log(e2u);
        conformality_[n] = std::max(std::abs(lx - ly) / std::sqrt(e2u), std::abs(dot(fx_[n], fy_[n])) / e2u);
        max_conformality_ = std::max(max_conformality_, conformality_[n]);
    }

    // Continue the normal across branch nodes from regular neighbours.
    for (std::size_t n : branch_) {
        const std::size_t i = grid_.col(n);
        const std::size_t j = grid_.row(n);
        Quaternion acc;
        for (int dj = -1; dj <= 1; ++dj) {
            for (int di = -1; di <= 1; ++di) {
                const long ii = static_cast<long>(i) + di;
                const long jj = static_cast<long>(j) + dj;
                if (ii < 0 || jj < 0 || ii >= static_cast<long>(grid_.nx) || jj >= static_cast<long>(grid_.ny)) continue;
                const std::size_t m = grid_.index(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj));
                if (!branch_mask_[m]) acc += n_[m];
            }
        }
        if (acc.norm() == 0.0) throw NumericalError("chartsurf", "build_immersion", "isolated normal undefined", n);
        n_[n] = acc.normalized();
    }

    if (max_conformality_ > options_.conformality_tol) {
        const auto worst = std::max_element(conformality_.begin(), conformality_.end());
        throw ValidationError("chartsurf", "build_immersion",
                              "samples are not conformal (residual " + std::to_string(*worst) + ")",
                              static_cast<std::size_t>(worst - conformality_.begin()));
    }
}

bool ChartImmersion::is_branch(std::size_t node) const { return branch_mask_[node] != 0; }

std::vector<FormValue> ChartImmersion::differential() const {
    std::vector<FormValue> out(fx_.size());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = {fx_[n], fy_[n]};
    return out;
}

double ChartImmersion::diameter() const { return quatsurf::diameter(f_); }

ChartImmersion build_immersion(const GridChart& grid, std::vector<Quaternion> samples,
                               const ImmersionOptions& options) {
    return ChartImmersion::from_samples(grid, std::move(samples), options);
}

CurvatureData weingarten_split(const ChartImmersion& imm) {
    const GridChart& grid = imm.grid();
    const Differentiator d(imm.options().stencil_order);
    const auto nx = d.dx(grid, imm.normal());
    const auto ny = d.dy(grid, imm.normal());

    CurvatureData out;
    out.grid = grid;
    const std::size_t size = grid.size();
    out.dN.resize(size);
    out.H.assign(size, kNaN);
    out.omega.values.resize(size);
    out.omega.kind = FormKind::anticonformal;
    out.omega.tangential = true;
    out.II.resize(size);
    out.hopf_qd.resize(size);
    out.metric.resize(size);

    for (std::size_t n = 0; n < size; ++n) {
        const Quaternion& fx = imm.fx()[n];
        const Quaternion& fy = imm.fy()[n];
        const FormValue dn{nx[n], ny[n]};
        out.dN[n] = dn;
        const auto split = split_conformal(dn, imm.normal()[n]);
        out.omega[n] = split.anticonformal;
        out.metric[n] = fx.norm() * fy.norm();

        SymmetricTensor2 s;
        s.xx = -dot(dn.ax, fx);
        s.yy = -dot(dn.ay, fy);
        s.xy = -0.5 * (dot(dn.ax, fy) + dot(dn.ay, fx));
        out.II[n] = s;
        out.hopf_qd[n] = two_zero_part(s);
        if (!imm.is_branch(n)) out.H[n] = -dot(split.conformal.ax, fx) / fx.norm2();
    }
    return out;
}

WeingartenResiduals weingarten_residuals(const ChartImmersion& imm, const CurvatureData& curv) {
    const std::size_t size = curv.grid.size();
    std::vector<FormValue> wres(size), anti(size), perp(size);
    for (std::size_t n = 0; n < size; ++n) {
        const FormValue df = imm.df(n);
        const Quaternion& N = imm.normal()[n];
        const double H = curv.H[n];
        const FormValue w = curv.dN[n] + H * df;
        wres[n] = w - curv.omega[n];
        anti[n] = star(w) + N * w;
        perp[n] = split_tangential(curv.dN[n], N).transversal;
        if (imm.is_branch(n)) {
            const Quaternion nan{kNaN, kNaN, kNaN, kNaN};
            wres[n] = anti[n] = perp[n] = {nan, nan};
        }
    }
    const double den = l2(curv.dN);
    WeingartenResiduals r;
    r.weingarten = relative(l2(wres), den);
    r.anticonformality = relative(l2(anti), den);
    r.normal_leak = relative(l2(perp), den);
    r.omega_fraction = relative(l2(curv.omega.values), den);
    return r;
}

std::vector<double> relate_hopf(const ChartImmersion& imm, const CurvatureData& curv) {
    std::vector<double> out(curv.grid.size(), kNaN);
    for (std::size_t n = 0; n < out.size(); ++n) {
        if (imm.is_branch(n)) continue;
        out[n] = norm(curv.omega[n] + df_solve(imm.fx()[n], imm.normal()[n], curv.hopf_qd[n]));
    }
    return out;
}

NodeList umbilics(const CurvatureData& curv, double tol) {
    double scale = 0.0;
    std::vector<double> rel(curv.grid.size(), kNaN);
    for (std::size_t n = 0; n < rel.size(); ++n) {
        const double g = curv.metric[n];
        if (!(g > 0.0)) continue;
        const auto& s = curv.II[n];
        const double ii = std::sqrt(s.xx * s.xx + 2.0 * s.xy * s.xy + s.yy * s.yy) / g;
        if (std::isfinite(ii)) scale = std::max(scale, ii);
        rel[n] = std::abs(curv.hopf_qd[n]) / g;
    }
    NodeList out;
    for (std::size_t n = 0; n < rel.size(); ++n) {
        if (std::isfinite(rel[n]) && rel[n] <= tol * scale) out.push_back(n);
    }
    return out;
}

std::vector<double> holo_function_check(const ChartImmersion& imm, const std::vector<Complex>& w) {
    const GridChart& grid = imm.grid();
    if (w.size() != grid.size()) throw ValidationError("chartsurf", "holo_function_check", "field/grid size mismatch");
    std::vector<Quaternion> g(w.size());
    for (std::size_t n = 0; n < w.size(); ++n) g[n] = nu_inverse(w[n], imm.normal()[n]);
    const Differentiator d(imm.options().stencil_order);
    const auto gx = d.dx(grid, g);
    const auto gy = d.dy(grid, g);
    std::vector<double> out(w.size(), kNaN);
    for (std::size_t n = 0; n < w.size(); ++n) {
        if (imm.is_branch(n)) continue;
        const Quaternion& N = imm.normal()[n];
        const Quaternion two = gx[n] * imm.fy()[n] - gy[n] * imm.fx()[n];
        const Quaternion tangential = 0.5 * (two + N * two * N);
        out[n] = tangential.norm() / std::exp(imm.log_conformal_factor()[n]);
    }
    return out;
}

std::vector<std::pair<double, double>> principal_curvatures(const CurvatureData& curv) {
    std::vector<std::pair<double, double>> out(curv.grid.size(), {kNaN, kNaN});
    for (std::size_t n = 0; n < out.size(); ++n) {
        const double g = curv.metric[n];
        if (!(g > 0.0)) continue;
        const auto& s = curv.II[n];
        const double mean = 0.5 * (s.xx + s.yy) / g;
        const double disc = 0.5 * std::hypot(s.xx - s.yy, 2.0 * s.xy) / g;
        out[n] = {mean - disc, mean + disc};
    }
    return out;
}

}  // namespace quatsurf
