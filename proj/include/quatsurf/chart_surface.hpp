#pragma once

// Sampled conformal immersions f: chart -> im(H) and their curvature.
//
// The Gauss map is always N = fx x fy / |fx x fy|, which is the orientation
// in which *df = N df.  The mean curvature H and the Hopf form omega are then
// fixed by the Weingarten splitting dN = -H df + omega.

#include <vector>

#include "quatsurf/forms.hpp"
#include "quatsurf/grid.hpp"

namespace quatsurf {

struct ImmersionOptions {
    int stencil_order = 4;
    // Largest accepted per-node conformality residual.
    double conformality_tol = 1e-3;
    // A node is degenerate when |fx x fy| <= degeneracy_tol * max |fx||fy|.
    double degeneracy_tol = 1e-10;
    // Accept degenerate nodes (branch points of dual maps) instead of
    // rejecting the samples.  Their normal is continued from the neighbours.
    bool allow_branch_points = false;
};

class ChartImmersion {
public:
    ChartImmersion() = default;
    // Frame by finite differences of the samples.
    static ChartImmersion from_samples(const GridChart& grid, std::vector<Quaternion> positions,
                                       const ImmersionOptions& options = {});
    // Frame supplied by the caller (analytic, or produced algebraically such
    // as a spin transform).
    static ChartImmersion from_frame(const GridChart& grid, std::vector<Quaternion> positions,
                                     std::vector<Quaternion> fx, std::vector<Quaternion> fy,
                                     const ImmersionOptions& options = {});

    const GridChart& grid() const { return grid_; }
    const ImmersionOptions& options() const { return options_; }
    const std::vector<Quaternion>& position() const { return f_; }
    const std::vector<Quaternion>& fx() const { return fx_; }
    const std::vector<Quaternion>& fy() const { return fy_; }
    const std::vector<Quaternion>& normal() const { return n_; }
    // u with e^u = sqrt(|fx| |fy|).
    const std::vector<double>& log_conformal_factor() const { return u_; }
    const std::vector<double>& conformality() const { return conformality_; }
    double conformality_residual() const { return max_conformality_; }
    const NodeList& branch_nodes() const { return branch_; }
    bool is_branch(std::size_t node) const;

    FormValue df(std::size_t node) const { return {fx_[node], fy_[node]}; }
    std::vector<FormValue> differential() const;
    double diameter() const;

private:
    void finish();

    GridChart grid_;
    ImmersionOptions options_;
    std::vector<Quaternion> f_, fx_, fy_, n_;
    std::vector<double> u_, conformality_;
    double max_conformality_ = 0.0;
    NodeList branch_;
    std::vector<char> branch_mask_;
};

// nu_f(a + bN) = a + ib, read off from the normal plane R + RN.
inline Complex nu(const Quaternion& q, const Quaternion& n) { return {q.w, dot(q.imag(), n)}; }
inline Quaternion nu_inverse(const Complex& c, const Quaternion& n) { return Quaternion(c.real()) + c.imag() * n; }

// Pointwise df \ phi: tau(d/dx) = fx^{-1} (Re phi + Im phi N), tau(d/dy) = -N tau(d/dx).
inline FormValue df_solve(const Quaternion& fx, const Quaternion& n, const Complex& phi) {
    const Quaternion ax = fx.inverse() * nu_inverse(phi, n);
    return {ax, -(n * ax)};
}

ChartImmersion build_immersion(const GridChart& grid, std::vector<Quaternion> samples,
                               const ImmersionOptions& options = {});

struct SymmetricTensor2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;
};

struct CurvatureData {
    GridChart grid;
    std::vector<FormValue> dN;
    std::vector<double> H;  // NaN at branch nodes
    QOneForm omega;         // anti-conformal part of dN
    std::vector<SymmetricTensor2> II;
    // Hopf differential II^{2,0} = phi dz^2 in the normalization
    // phi = -nu_f(fx omega(d/dx)) = -((II_xx - II_yy)/2 - i II_xy),
    // for which omega = -df \ II^{2,0}.
    std::vector<Complex> hopf_qd;
    std::vector<double> metric;  // e^{2u}
};

CurvatureData weingarten_split(const ChartImmersion& imm);

// Hopf differential coefficient of a symmetric tensor in isothermal coordinates.
inline Complex two_zero_part(const SymmetricTensor2& s) { return -Complex{0.5 * (s.xx - s.yy), -s.xy}; }

struct WeingartenResiduals {
    double weingarten = 0.0;         // |dN + H df - omega| / |dN|
    double anticonformality = 0.0;   // |*w + N w| / |dN| with w = dN + H df
    double normal_leak = 0.0;        // |(dN)^perp| / |dN|
    double omega_fraction = 0.0;     // |omega| / |dN|
};

WeingartenResiduals weingarten_residuals(const ChartImmersion& imm, const CurvatureData& curv);

// Pointwise |omega + df \ II^{2,0}|.
std::vector<double> relate_hopf(const ChartImmersion& imm, const CurvatureData& curv);

// Nodes where |II^{2,0}| / e^{2u} < tol * max over the chart of |II|_g.
NodeList umbilics(const CurvatureData& curv, double tol = 1e-6);

// Pointwise |(d((a + bN) df))^T(d/dx, d/dy)| / e^u for w = a + ib, which equals
// the Cauchy-Riemann defect sqrt((a_y + b_x)^2 + (a_x - b_y)^2).
std::vector<double> holo_function_check(const ChartImmersion& imm, const std::vector<Complex>& w);

// Principal curvatures (k1 <= k2) per node from II and the metric.
std::vector<std::pair<double, double>> principal_curvatures(const CurvatureData& curv);

}  // namespace quatsurf
