#include "quatsurf/ivp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "quatsurf/errors.hpp"
#include "quatsurf/fields.hpp"
#include "quatsurf/stencil.hpp"

namespace quatsurf {

namespace {

constexpr double kPi = std::numbers::pi;

const Quaternion kBasis[4] = {quaternion_units::one, quaternion_units::i, quaternion_units::j, quaternion_units::k};

template <class T>
std::vector<T> take_block(const std::vector<T>& v, const GridChart& grid, const MarchResult& m) {
    const GridChart& s = m.strip;
    std::vector<T> out;
    out.reserve(s.size());
    for (std::size_t j = 0; j < s.ny; ++j) {
        for (std::size_t i = 0; i < s.nx; ++i) out.push_back(v[grid.index(i + m.first_col, j + m.first_row)]);
    }
    return out;
}

double symbol_det(const ChartImmersion& imm, const QOneForm& tau, std::size_t node, double angle) {
    return symbol(imm, tau, node, {std::cos(angle), std::sin(angle)}).normalized_det;
}

// Right-hand side lambda_y of the solved system on one row.
class RowSystem {
public:
    RowSystem(const CauchyProblem& prob, const MarchOptions& options)
        : prob_(prob), options_(options), d_(options.stencil_order) {}

    std::size_t half_width() const { return d_.width() / 2; }

    // lam is valid on columns [lo, hi); the result on [lo + hw, hi - hw).
    std::vector<Quaternion> operator()(std::size_t row, const std::vector<Quaternion>& lam, std::size_t lo,
                                       std::size_t hi, double& max_cond) const {
        const GridChart& g = prob_.background.grid();
        const std::size_t hw = half_width();
        std::vector<Quaternion> lx(hi - lo), out(g.nx);
        d_.apply_line<Quaternion>(std::span<const Quaternion>(lam).subspan(lo, hi - lo), 0, 1, hi - lo, g.hx, lx);
        for (std::size_t i = lo + hw; i + hw < hi; ++i) {
            out[i] = solve(g.index(i, row), lam[i], lx[i - lo], max_cond);
        }
        return out;
    }

private:
    Quaternion solve(std::size_t n, const Quaternion& l, const Quaternion& lx, double& max_cond) const {
        const ChartImmersion& f = prob_.background;
        const Quaternion& fx = f.fx()[n];
        const Quaternion& fy = f.fy()[n];
        const Quaternion& N = f.normal()[n];
        const FormValue& t = prob_.tau[n];
        const Quaternion lb = l.conj();
        const Quaternion li = l.inverse();

        Eigen::Matrix4d m;
        for (int k = 0; k < 4; ++k) {
            const Quaternion a = kBasis[k];
            const Quaternion e1 = (lb * fx * a).imag();
            m(0, k) = e1.x;
            m(1, k) = e1.y;
            m(2, k) = e1.z;
            m(3, k) = dot(cross((a * li).imag(), t.ax), N);
        }
        const Quaternion r1 = (lb * fy * lx).imag();
        const Quaternion theta_x = (lx * li).imag();
        Eigen::Vector4d b(r1.x, r1.y, r1.z, dot(cross(theta_x, t.ay), N) - prob_.zero_order[n]);

        Eigen::FullPivLU<Eigen::Matrix4d> lu(m);
        const double rc = lu.rcond();
        const double cond = rc > 0.0 ? 1.0 / rc : INFINITY;
        max_cond = std::max(max_cond, cond);
        if (!(cond <= options_.condition_limit)) {
            throw NumericalError("ivp", "march_solve",
                                 "ill-conditioned system (condition " + std::to_string(cond) + ")", n);
        }
        const Eigen::Vector4d s = lu.solve(b);
        return {s(0), s(1), s(2), s(3)};
    }

    const CauchyProblem& prob_;
    MarchOptions options_;
    Differentiator d_;
};

}  // namespace

CauchyProblem CauchyProblem::make(ChartImmersion background, QuadDifferential q, std::size_t row,
                                  std::vector<Quaternion> mu) {
    const GridChart& g = background.grid();
    if (!q.grid.same_layout(g)) throw ValidationError("ivp", "cauchy_problem", "q and background grids differ");
    if (row >= g.ny) throw ValidationError("ivp", "cauchy_problem", "initial row outside grid");
    if (mu.empty()) mu.assign(g.nx, quaternion_units::one);
    if (mu.size() != g.nx) throw ValidationError("ivp", "cauchy_problem", "Cauchy data must have one value per row node");
    CauchyProblem p;
    p.tau = form_from_qdiff(background, q);
    const CurvatureData curv = weingarten_split(background);
    p.omega = curv.omega.values;
    p.zero_order.resize(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
        p.zero_order[n] = 0.5 * (dot(p.omega[n].ay, p.tau[n].ax) - dot(p.omega[n].ax, p.tau[n].ay));
    }
    p.background = std::move(background);
    p.q = std::move(q);
    p.row = row;
    p.mu = std::move(mu);
    return p;
}

std::vector<FormValue> CauchyProblem::initial_frame() const {
    const GridChart& g = background.grid();
    std::vector<FormValue> out(g.nx);
    for (std::size_t i = 0; i < g.nx; ++i) {
        const Quaternion& m = mu[i];
        out[i] = m.conj() * background.df(g.index(i, row)) * m;
    }
    return out;
}

SymbolMap symbol(const ChartImmersion& imm, const QOneForm& tau, std::size_t node, std::array<double, 2> xi,
                 double rank_tol) {
    if (node >= imm.grid().size()) throw ValidationError("ivp", "symbol", "node outside grid");
    const Quaternion& N = imm.normal()[node];
    SymbolMap s;
    s.A = xi[1] * imm.fx()[node] - xi[0] * imm.fy()[node];
    s.B = xi[0] * tau[node].ay - xi[1] * tau[node].ax;
    Eigen::Matrix4d m;
    for (int k = 0; k < 4; ++k) {
        const Quaternion a = kBasis[k];
        const Quaternion ia = (s.A * a).imag();
        m(0, k) = ((a * s.B).imag() * N).w;
        m(1, k) = ia.x;
        m(2, k) = ia.y;
        m(3, k) = ia.z;
    }
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) s.matrix[static_cast<std::size_t>(4 * r + c)] = m(r, c);
    }
    s.det = m.determinant();
    const double scale = std::pow(s.A.norm(), 3) * s.B.norm();
    s.normalized_det = scale > 0.0 ? s.det / scale : 0.0;
    const Eigen::JacobiSVD<Eigen::Matrix4d> svd(m);
    const auto sv = svd.singularValues();
    for (int k = 0; k < 4; ++k) {
        if (!(sv(k) > rank_tol * std::max(sv(0), 1e-300))) ++s.kernel_dim;
    }
    if (sv(0) == 0.0) s.kernel_dim = 4;
    return s;
}

AngularZeros symbol_zeros(const ChartImmersion& imm, const QOneForm& tau, const QuadDifferential& q, std::size_t node,
                          std::size_t samples) {
    if (samples < 8) throw ValidationError("ivp", "symbol_zeros", "need at least 8 sweep samples");
    std::vector<double> d(samples);
    const double step = 2.0 * kPi / static_cast<double>(samples);
    double peak = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        d[k] = std::abs(symbol_det(imm, tau, node, step * static_cast<double>(k)));
        peak = std::max(peak, d[k]);
    }
    AngularZeros out;
    const double theta_h = horizontal_angle(q.phi[node]);
    for (std::size_t k = 0; k < samples; ++k) {
        const double prev = d[(k + samples - 1) % samples];
        const double next = d[(k + 1) % samples];
        if (!(d[k] <= prev && d[k] < next && d[k] < 1e-2 * peak)) continue;
        // Golden-section refinement on the bracket around the sample.
        double a = step * (static_cast<double>(k) - 1.0);
        double b = step * (static_cast<double>(k) + 1.0);
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - gr * (b - a);
        double e = a + gr * (b - a);
        double fc = std::abs(symbol_det(imm, tau, node, c));
        double fe = std::abs(symbol_det(imm, tau, node, e));
        for (int it = 0; it < 80; ++it) {
            if (fc < fe) {
                b = e;
                e = c;
                fe = fc;
                c = b - gr * (b - a);
                fc = std::abs(symbol_det(imm, tau, node, c));
            } else {
                a = c;
                c = e;
                fc = fe;
                e = a + gr * (b - a);
                fe = std::abs(symbol_det(imm, tau, node, e));
            }
        }
        double t = std::fmod(0.5 * (a + b) + 2.0 * kPi, 2.0 * kPi);
        out.angles.push_back(t);
        const double off = std::remainder(t - theta_h, 0.5 * kPi);
        out.stretch_errors_deg.push_back(std::abs(off) * 180.0 / kPi);
    }
    return out;
}

WellposedReport check_wellposed(const CauchyProblem& prob, double min_det, double min_angle_deg) {
    const GridChart& g = prob.background.grid();
    WellposedReport r;
    r.det_margin = INFINITY;
    for (std::size_t i = 0; i < g.nx; ++i) {
        const std::size_t n = g.index(i, prob.row);
        const double det = std::abs(symbol(prob.background, prob.tau, n, {0.0, 1.0}).normalized_det);
        if (det < r.det_margin) {
            r.det_margin = det;
            r.worst_node = n;
        }
    }
    const auto nc = noncharacteristic(ChartCurve::row(g, prob.row), prob.q, prob.background, min_angle_deg);
    r.angle_margin_deg = nc.margin_deg;
    r.meets_zero_locus = nc.meets_zero_locus;
    r.wellposed = !r.meets_zero_locus && r.det_margin > min_det && r.angle_margin_deg > min_angle_deg;
    return r;
}

MarchResult march_solve(const CauchyProblem& prob, std::size_t steps, std::optional<double> h_march,
                        const MarchOptions& options) {
    const GridChart& g = prob.background.grid();
    if (h_march && std::abs(*h_march - g.hy) > 1e-12 * g.hy) {
        throw ValidationError("ivp", "march_solve", "march step must equal the background row spacing");
    }
    if (steps < 2) throw ValidationError("ivp", "march_solve", "need at least 2 march steps for a strip of 5 rows");
    if (prob.row < steps || prob.row + steps >= g.ny) {
        throw ValidationError("ivp", "march_solve", "strip leaves the background chart");
    }
    const WellposedReport wp = check_wellposed(prob);
    if (!wp.wellposed) {
        throw ValidationError("ivp", "march_solve",
                              "characteristic initial curve (det margin " + std::to_string(wp.det_margin) +
                                  ", angle margin " + std::to_string(wp.angle_margin_deg) + " deg)",
                              wp.worst_node);
    }

    const RowSystem rhs(prob, options);
    const std::size_t shrink = 2 * rhs.half_width();
    if (g.nx < 2 * shrink * steps + 5) {
        throw ValidationError("ivp", "march_solve",
                              "strip narrower than 5 columns (need " + std::to_string(2 * shrink * steps + 5) +
                                  " columns for " + std::to_string(steps) + " steps)");
    }

    MarchResult out;
    out.steps = steps;
    out.first_row = prob.row - steps;
    out.first_col = shrink * steps;
    out.strip = g.block(out.first_col, g.nx - out.first_col, out.first_row, prob.row + steps + 1);
    out.lambda.lambda.assign(out.strip.size(), Quaternion{});

    double peak = 0.0;
    for (const auto& m : prob.mu) peak = std::max(peak, m.norm());
    const double floor = options.min_lambda * peak;
    const std::size_t hw = rhs.half_width();
    const auto store = [&](std::size_t row, const std::vector<Quaternion>& lam) {
        std::copy(lam.begin() + static_cast<long>(out.first_col), lam.begin() + static_cast<long>(g.nx - out.first_col),
                  out.lambda.lambda.begin() + static_cast<long>((row - out.first_row) * out.strip.nx));
    };
    store(prob.row, prob.mu);

    for (const int dir : {1, -1}) {
        const double h = dir * g.hy;
        std::vector<Quaternion> lam = prob.mu;
        std::size_t row = prob.row;
        std::size_t lo = 0;
        std::size_t hi = g.nx;
        for (std::size_t s = 0; s < steps; ++s) {
            const std::size_t next = dir > 0 ? row + 1 : row - 1;
            const auto k1 = rhs(row, lam, lo, hi, out.max_condition);
            std::vector<Quaternion> pred(g.nx);
            for (std::size_t i = lo + hw; i + hw < hi; ++i) pred[i] = lam[i] + h * k1[i];
            const auto k2 = rhs(next, pred, lo + hw, hi - hw, out.max_condition);
            lo += shrink;
            hi -= shrink;
            for (std::size_t i = lo; i < hi; ++i) {
                lam[i] = lam[i] + (0.5 * h) * (k1[i] + k2[i]);
                if (!lam[i].is_finite() || !(lam[i].norm() > floor)) {
                    throw NumericalError("ivp", "march_solve", "lambda degenerates", g.index(i, next));
                }
            }
            row = next;
            store(row, lam);
        }
    }
    return out;
}

GridChart strip_chart(std::size_t n, std::size_t steps, int stencil_order) {
    if (n < 5 || n % 2 == 0) throw ValidationError("ivp", "strip_chart", "need an odd row count of at least 5");
    const std::size_t shrink = Differentiator(stencil_order).width() / 2 * 2;
    const std::size_t nx = n + 2 * shrink * steps;
    const double h = 2.0 / static_cast<double>(n - 1);
    const double half = 0.5 * static_cast<double>(nx - 1) * h;
    return GridChart::span(-half, half, nx, -1.0, 1.0, n);
}

SystemResiduals system_residuals(const CauchyProblem& prob, const MarchResult& march) {
    const GridChart& s = march.strip;
    const GridChart& g = prob.background.grid();
    const Differentiator d(prob.background.options().stencil_order);
    const auto& lam = march.lambda.lambda;
    const auto lx = d.dx(s, lam);
    const auto ly = d.dy(s, lam);
    SystemResiduals r;
    for (std::size_t j = 2; j + 2 < s.ny; ++j) {
        for (std::size_t i = 2; i + 2 < s.nx; ++i) {
            const std::size_t k = s.index(i, j);
            const std::size_t n = g.index(i + march.first_col, j + march.first_row);
            const Quaternion lb = lam[k].conj();
            const Quaternion li = lam[k].inverse();
            const Quaternion c = (lb * prob.background.fx()[n] * ly[k] - lb * prob.background.fy()[n] * lx[k]).imag();
            r.closedness = std::max(r.closedness, c.norm());
            const Quaternion tx = (lx[k] * li).imag();
            const Quaternion ty = (ly[k] * li).imag();
            const Quaternion C = cross(tx, prob.tau[n].ay) - cross(ty, prob.tau[n].ax);
            r.scalar = std::max(r.scalar, std::abs(dot(C, prob.background.normal()[n]) - prob.zero_order[n]));
        }
    }
    return r;
}

Reconstruction reconstruct(const CauchyProblem& prob, const MarchResult& march, const ReconstructOptions& options) {
    const GridChart& g = prob.background.grid();
    const GridChart& s = march.strip;
    const ChartImmersion& bg = prob.background;

    Reconstruction out;
    out.background = ChartImmersion::from_frame(s, take_block(bg.position(), g, march), take_block(bg.fx(), g, march),
                                                take_block(bg.fy(), g, march), bg.options());
    SpinOptions so;
    so.basepoint = options.basepoint;
    so.closedness_tol = options.closedness_tol;
    const SpinResult spin = spin_integrate(out.background, march.lambda, so);
    out.ftilde = spin.immersion;
    out.closedness = spin.closedness;
    out.path_deviation = spin.path_deviation;

    const auto phi0 = prob.initial_frame();
    const std::size_t j0 = prob.row - march.first_row;
    for (std::size_t i = 0; i < s.nx; ++i) {
        out.initial_mismatch = std::max(out.initial_mismatch, norm(out.ftilde.df(s.index(i, j0)) - phi0[i + march.first_col]));
    }

    QuadDifferential qs;
    qs.grid = s;
    qs.phi = take_block(prob.q.phi, g, march);
    const QOneForm tt = form_from_qdiff(out.ftilde, qs);
    const auto curl = exterior_derivative(s, tt.values, bg.options().stencil_order);
    const Differentiator d(bg.options().stencil_order);
    std::vector<Quaternion> ax(tt.size()), ay(tt.size());
    for (std::size_t n = 0; n < tt.size(); ++n) {
        ax[n] = tt[n].ax;
        ay[n] = tt[n].ay;
    }
    const auto axx = d.dx(s, ax), axy = d.dy(s, ax), ayx = d.dx(s, ay), ayy = d.dy(s, ay);
    std::vector<FormValue> gx(tt.size()), gy(tt.size());
    std::vector<Quaternion> tang(tt.size());
    for (std::size_t n = 0; n < tt.size(); ++n) {
        gx[n] = {axx[n], axy[n]};
        gy[n] = {ayx[n], ayy[n]};
        const Quaternion& N = out.ftilde.normal()[n];
        tang[n] = 0.5 * (curl[n] + N * curl[n] * N);
    }
    const double den = std::hypot(l2(gx), l2(gy));
    out.dual_curl = relative(l2(curl), den);
    out.dual_curl_tangential = relative(l2(tang), den);
    return out;
}

}  // namespace quatsurf
