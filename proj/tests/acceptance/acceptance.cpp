// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "quatsurf/alignment.hpp"
#include "quatsurf/bonnet.hpp"
#include "quatsurf/cli.hpp"
#include "quatsurf/duality.hpp"
#include "quatsurf/errors.hpp"
#include "quatsurf/fields.hpp"
#include "quatsurf/generators.hpp"
#include "quatsurf/ivp.hpp"
#include "quatsurf/qdiff.hpp"

using namespace quatsurf;

namespace {

const std::vector<std::size_t> kLadder{33, 65, 129};
constexpr double kOrder = 1.9;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [fail]");
    }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

// Minimum of log2(r_k / r_{k+1}); pairs at rounding level are skipped.
double order(const std::vector<double>& r) {
    double best = INFINITY;
    for (std::size_t k = 0; k + 1 < r.size(); ++k) {
        if (r[k] < 1e-13) continue;
        best = std::min(best, std::log2(r[k] / r[k + 1]));
    }
    return best;
}

void require_order(Outcome& o, const std::string& name, const std::vector<double>& r) {
    const double p = order(r);
    o.require(p >= kOrder, name + " order " + (std::isinf(p) ? std::string("inf") : fmt("%.2f", p)));
}

GeneratedSurface surface(const std::string& name, std::size_t n, const GeneratorParams& p = {},
                         const ImmersionOptions& opt = {}) {
    return generate(name, default_chart(name, n), p, opt);
}

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

double relative_spread(const std::vector<double>& v) {
    const Stats s = stats(v);
    return s.stddev / std::abs(s.mean);
}

Outcome weingarten_identity() {
    Outcome o;
    for (const char* name : {"sphere", "cylinder", "catenoid", "unduloid"}) {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<double> r;
        for (std::size_t n : kLadder) {
            const auto g = surface(name, n);
            r.push_back(weingarten_residuals(g.immersion, weingarten_split(g.immersion)).weingarten);
        }
        require_order(o, name, r);
        const double t = seconds_since(t0);
        o.require(t < 5.0, std::string(name) + fmt(" %.2f s", t));
    }
    // The umbilic sphere needs a wide stencil to reach the bound at n = 65.
    ImmersionOptions wide;
    wide.stencil_order = 12;
    const auto s = surface("sphere", 65, {}, wide);
    const double w = weingarten_residuals(s.immersion, weingarten_split(s.immersion)).omega_fraction;
    o.require(w < 1e-8, "sphere |omega|/|dN| " + fmt("%.1e", w));
    return o;
}

Outcome anticonformality() {
    Outcome o;
    for (const char* name : {"sphere", "cylinder", "catenoid", "unduloid"}) {
        std::vector<double> a, t;
        for (std::size_t n : kLadder) {
            const auto g = surface(name, n);
            const auto r = weingarten_residuals(g.immersion, weingarten_split(g.immersion));
            a.push_back(r.anticonformality);
            t.push_back(r.normal_leak);
        }
        require_order(o, std::string(name) + " star", a);
        require_order(o, std::string(name) + " perp", t);
    }
    return o;
}

Outcome duality() {
    Outcome o;
    for (const char* name : {"cylinder", "catenoid"}) {
        std::vector<double> classical;
        for (std::size_t n : kLadder) {
            const auto g = surface(name, n);
            const auto dual = integrate_dual(g.immersion, *g.q);
            const auto rep = verify_duality(g.immersion, dual, weingarten_split(g.immersion));
            classical.push_back(rep.classical);
            if (n != kLadder.back()) continue;
            const std::string p(name);
            o.require(dual.path_deviation < 1e-6, p + " path " + fmt("%.1e", dual.path_deviation));
            double flip = 0.0;
            for (std::size_t k = 0; k < dual.fstar.size(); ++k) {
                flip = std::max(flip, (dual.immersion.normal()[k] + g.immersion.normal()[k]).norm());
            }
            o.require(flip < 1e-6, p + " |N*+N| " + fmt("%.1e", flip));
            const auto twice = integrate_dual(dual.immersion, dual.q);
            const auto fit = scale_translation_fit(twice.fstar, g.immersion.position());
            const double back = fit.rms / g.immersion.diameter();
            o.require(back < 1e-5, p + " dual-of-dual " + fmt("%.1e", back));
        }
        require_order(o, std::string(name) + " classical", classical);
    }
    return o;
}

Outcome christoffel() {
    Outcome o;
    const auto cyl = surface("cylinder", 33);
    const auto cat = surface("catenoid", 33);
    const auto sph = surface("sphere", 33);
    const auto affine = [](const GeneratedSurface& g, double a, Quaternion v) {
        auto p = g.immersion.position();
        for (auto& x : p) x = a * x + v;
        return build_immersion(g.immersion.grid(), std::move(p));
    };
    ImmersionOptions branched;
    branched.allow_branch_points = true;
    const auto cyl_dual = build_immersion(cyl.immersion.grid(), *cyl.dual, branched);
    const auto cat_dual = build_immersion(cat.immersion.grid(), *cat.dual, branched);
    struct Case {
        const char* name;
        const ChartImmersion& a;
        ChartImmersion b;
        ChristoffelKind expect;
    };
    const Case cases[] = {
        {"cylinder/2f+v", cyl.immersion, affine(cyl, 2.0, Quaternion::vector(0.3, -1.0, 2.0)), ChristoffelKind::scaling},
        {"catenoid/-1.5f+v", cat.immersion, affine(cat, -1.5, Quaternion::vector(1.0, 0.0, 0.5)),
         ChristoffelKind::scaling},
        {"cylinder/dual", cyl.immersion, cyl_dual, ChristoffelKind::dual_pair},
        {"catenoid/sphere dual", cat.immersion, cat_dual, ChristoffelKind::dual_pair},
        {"cylinder/catenoid", cyl.immersion, cat.immersion, ChristoffelKind::unrelated},
        {"sphere/cylinder", sph.immersion, cyl.immersion, ChristoffelKind::unrelated},
    };
    int correct = 0;
    for (const auto& c : cases) {
        const auto got = classify_christoffel(c.a, c.b).kind;
        correct += got == c.expect ? 1 : 0;
        o.require(got == c.expect, std::string(c.name) + " " + to_string(got));
    }
    o.require(correct == 6, std::to_string(correct) + "/6");
    return o;
}

Outcome bonnet() {
    Outcome o;
    for (double eps : {0.5, 1.0, 2.0}) {
        std::vector<double> metric, dh, cong;
        for (std::size_t n : kLadder) {
            const auto g = surface("cylinder", n);
            const auto pair = bonnet_pair(g.immersion, integrate_dual(g.immersion, *g.q), eps);
            metric.push_back(pair.metric_residual);
            dh.push_back(pair.H_difference);
            cong.push_back(pair.congruence_rms / pair.diameter);
        }
        const std::string p = fmt("eps %g", eps);
        const double m = *std::max_element(metric.begin(), metric.end());
        const double c = *std::min_element(cong.begin(), cong.end());
        o.require(m < 1e-8, p + " metric " + fmt("%.1e", m));
        require_order(o, p + " dH", dh);
        o.require(c > 1e-3, p + " congruence/diameter " + fmt("%.3f", c));
    }
    return o;
}

Outcome shape_distortion() {
    Outcome o;
    GeneratorParams p;
    p.order = 2;  // z dz^2: the dual branches at the origin
    std::vector<double> distortion, cr;
    for (std::size_t n : kLadder) {
        const auto g = surface("enneper", n, p);
        DualOptions opt;
        opt.base_value = g.dual->front();
        const auto dual = integrate_dual(g.immersion, *g.q, opt);
        const auto pair = bonnet_pair(g.immersion, dual, 1.0);
        distortion.push_back(shape_distortion_check(g.immersion, dual, pair));
        cr.push_back(pair.D_cr_residual);
        if (n != 65) continue;
        const auto c = umbilic_branch_correspondence(pair, dual, 1e-3);
        const bool equal = !c.branch_nodes.empty() && c.umbilics_plus == c.branch_nodes &&
                           c.umbilics_minus == c.branch_nodes && c.distortion_zeros == c.branch_nodes;
        o.require(equal && c.coincide, "node sets at n = 65 " + std::string(equal ? "equal" : "differ"));
    }
    require_order(o, "df\\D - 4 eps *df*", distortion);
    require_order(o, "D Cauchy-Riemann", cr);
    return o;
}

Outcome nonconstant_mates() {
    Outcome o;
    for (std::size_t n : kLadder) {
        const auto g = surface("unduloid", n);
        const auto pair = bonnet_pair(g.immersion, integrate_dual(g.immersion, *g.q), 1.0);
        const double sp = relative_spread(pair.Hplus), sm = relative_spread(pair.Hminus);
        o.require(sp > 1e-3 && sm > 1e-3, fmt("n = %.0f", static_cast<double>(n)) + " mates " + fmt("%.2f", sp) +
                                              "/" + fmt("%.2f", sm));
        if (n == kLadder.back()) {
            const double in = relative_spread(weingarten_split(g.immersion).H);
            o.require(in < 1e-6, "input at n = 129 " + fmt("%.1e", in));
        }
    }
    return o;
}

Outcome cauchy_problem() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    constexpr std::size_t steps = 16;
    GeneratorParams rotated;
    rotated.theta = 0.25 * std::numbers::pi;
    std::vector<double> lam, ft;
    for (std::size_t rows : kLadder) {
        const auto g = generate("cylinder", strip_chart(rows, steps), rotated);
        const auto prob = CauchyProblem::make(g.immersion, *g.q, (rows - 1) / 2);
        const auto m = march_solve(prob, steps);
        double e = 0.0;
        for (const auto& l : m.lambda.lambda) e = std::max(e, (l - Quaternion(1.0)).norm());
        lam.push_back(e);
        const auto rec = reconstruct(prob, m);
        const auto& a = rec.ftilde.position();
        const auto& b = rec.background.position();
        Quaternion shift;
        for (std::size_t k = 0; k < a.size(); ++k) shift += (b[k] - a[k]) / static_cast<double>(a.size());
        double s = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] + shift - b[k]).norm2();
        ft.push_back(std::sqrt(s / static_cast<double>(a.size())));
    }
    require_order(o, "lambda", lam);
    require_order(o, "f~", ft);

    const auto g = generate("cylinder", default_chart("cylinder", 33), rotated);
    const auto tau = form_from_qdiff(g.immersion, *g.q);
    const auto z = symbol_zeros(g.immersion, tau, *g.q, g.immersion.grid().index(16, 16));
    const double worst = z.stretch_errors_deg.empty()
                             ? INFINITY
                             : *std::max_element(z.stretch_errors_deg.begin(), z.stretch_errors_deg.end());
    o.require(z.angles.size() == 4, std::to_string(z.angles.size()) + " symbol zeros");
    o.require(worst < 2.0, "angle error " + fmt("%.1e deg", worst));

    const auto axis = generate("cylinder", default_chart("cylinder", 33));
    bool rejected = false;
    try {
        march_solve(CauchyProblem::make(axis.immersion, *axis.q, 16), 2);
    } catch (const ValidationError&) {
        rejected = true;
    }
    o.require(rejected, "characteristic row rejected");
    const double t = seconds_since(t0);
    o.require(t < 30.0, fmt("%.2f s", t));
    return o;
}

Outcome determinism() {
    Outcome o;
    RunConfig c;
    c.command = "verify";
    c.all = true;
    const auto a = run(c), b = run(c);
    o.require(a.report == b.report, "reports " + std::string(a.report == b.report ? "identical" : "differ"));
    o.require(a.exit_code == 0, "verify exit " + std::to_string(a.exit_code));
    return o;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"weingarten identity", weingarten_identity},
        {"anti-conformality and tangentiality", anticonformality},
        {"duality", duality},
        {"christoffel classification", christoffel},
        {"bonnet mates", bonnet},
        {"shape distortion", shape_distortion},
        {"non-constant mean curvature of mates", nonconstant_mates},
        {"cauchy problem", cauchy_problem},
        {"determinism", determinism},
    };
    int failed = 0;
    int id = 0;
    for (const auto& [name, fn] : criteria) {
        ++id;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    }
    return failed == 0 ? 0 : 1;
}
