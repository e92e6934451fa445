#include <cmath>
#include <numbers>

#include "doctest.h"

#include "quatsurf/chart_surface.hpp"
#include "quatsurf/errors.hpp"
#include "quatsurf/fields.hpp"
#include "quatsurf/generators.hpp"

using namespace quatsurf;

namespace {

GeneratedSurface make(const char* name, std::size_t n, GeneratorParams p = {}) {
    return generate(name, default_chart(name, n), p);
}

double max_dev(const std::vector<double>& v, double target) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x - target));
    return m;
}

}  // namespace

TEST_CASE("non-conformal samples are rejected with the worst node") {
    const GridChart g = GridChart::span(-1, 1, 9, -1, 1, 9);
    std::vector<Quaternion> p(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) p[n] = Quaternion::vector(g.x(g.col(n)), 2.0 * g.y(g.row(n)), 0.0);
    try {
        build_immersion(g, p);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.module() == "chartsurf");
        CHECK(e.node().has_value());
    }
}

TEST_CASE("degenerate samples raise a numerical error unless branch points are allowed") {
    const GridChart g = GridChart::span(-1, 1, 9, -1, 1, 9);
    std::vector<Quaternion> p(g.size());
    // (x^2 - y^2, 2xy, 0) = z^2 is conformal with a branch point at 0.
    for (std::size_t n = 0; n < g.size(); ++n) {
        const double x = g.x(g.col(n)), y = g.y(g.row(n));
        p[n] = Quaternion::vector(x * x - y * y, 2.0 * x * y, 0.0);
    }
    CHECK_THROWS_AS(build_immersion(g, p), NumericalError);
    ImmersionOptions o;
    o.allow_branch_points = true;
    const auto imm = build_immersion(g, p, o);
    REQUIRE(imm.branch_nodes().size() == 1);
    CHECK(imm.branch_nodes()[0] == g.index(4, 4));
    CHECK(imm.is_branch(g.index(4, 4)));
    CHECK((imm.normal()[g.index(4, 4)] - Quaternion::vector(0, 0, 1)).norm() < 1e-12);
}

TEST_CASE("sphere: H = 1 and omega vanishes") {
    const auto s = make("sphere", 65);
    const auto c = weingarten_split(s.immersion);
    // Oracle: the inward normal of the unit sphere is -f, so dN = -df.
    double nerr = 0.0;
    for (std::size_t n = 0; n < c.grid.size(); ++n) nerr = std::max(nerr, (s.immersion.normal()[n] + s.immersion.position()[n]).norm());
    CHECK(nerr < 1e-5);
    CHECK(max_dev(c.H, 1.0) < 1e-3);
    const auto r = weingarten_residuals(s.immersion, c);
    CHECK(r.omega_fraction < 1e-4);
    CHECK(umbilics(c, 1e-3).size() == c.grid.size());
}

TEST_CASE("cylinder: H, principal curvatures and Hopf coefficient") {
    const auto s = make("cylinder", 33);
    const auto c = weingarten_split(s.immersion);
    CHECK(max_dev(c.H, 0.5) < 1e-5);
    const auto pc = principal_curvatures(c);
    for (const auto& [k1, k2] : pc) {
        CHECK(k1 == doctest::Approx(0.0).epsilon(1e-5).scale(1.0));
        CHECK(k2 == doctest::Approx(1.0).epsilon(1e-5));
    }
    // II = diag(1, 0) in the metric g = 1, so II^{2,0} = -1/2.
    for (const auto& h : c.hopf_qd) CHECK(std::abs(h - Complex(-0.5, 0.0)) < 1e-5);
    const auto r = weingarten_residuals(s.immersion, c);
    CHECK(r.omega_fraction == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
    CHECK(umbilics(c, 1e-3).empty());
}

TEST_CASE("catenoid: minimal with Hopf coefficient +1 and K = -1/cosh^4") {
    const std::size_t n = 33;
    const auto s = make("catenoid", n);
    const auto c = weingarten_split(s.immersion);
    CHECK(max_abs(c.H) < 1e-4);
    for (const auto& h : c.hopf_qd) CHECK(std::abs(h - Complex(1.0, 0.0)) < 1e-4);
    const auto pc = principal_curvatures(c);
    for (std::size_t k = 0; k < c.grid.size(); ++k) {
        const double ch = std::cosh(c.grid.y(c.grid.row(k)));
        CHECK(pc[k].first * pc[k].second == doctest::Approx(-1.0 / std::pow(ch, 4)).epsilon(1e-3));
        CHECK(c.metric[k] == doctest::Approx(ch * ch).epsilon(1e-5));
    }
}

TEST_CASE("Enneper: Hopf coefficient m z^(m-1) and Gauss curvature") {
    for (int m : {1, 2, 3}) {
        GeneratorParams p;
        p.order = m;
        const auto s = make("enneper", 65, p);
        const auto c = weingarten_split(s.immersion);
        double herr = 0.0, peak = 0.0;
        for (std::size_t k = 0; k < c.grid.size(); ++k) {
            const Complex exact = static_cast<double>(m) * std::pow(c.grid.point(k), m - 1);
            herr = std::max(herr, std::abs(c.hopf_qd[k] - exact));
            peak = std::max(peak, std::abs(exact));
        }
        CAPTURE(m);
        CHECK(herr / peak < 1e-3);
    }
    const auto s = make("enneper", 33);
    const auto c = weingarten_split(s.immersion);
    const auto pc = principal_curvatures(c);
    for (std::size_t k = 0; k < c.grid.size(); ++k) {
        const double a = std::norm(c.grid.point(k));
        CHECK(pc[k].first * pc[k].second == doctest::Approx(-16.0 / std::pow(1.0 + a, 4)).epsilon(1e-3));
    }
}

TEST_CASE("Hopf form relation omega = -df \\ II^{2,0}") {
    // Exact up to the normal leak of the sampled dN, so it shrinks with h.
    for (const char* name : {"cylinder", "catenoid", "unduloid"}) {
        std::vector<double> r;
        for (std::size_t n : {33, 65}) {
            const auto s = make(name, n);
            r.push_back(max_abs(relate_hopf(s.immersion, weingarten_split(s.immersion))));
        }
        CAPTURE(name);
        CHECK(r[0] < 1e-4);
        CHECK(r[1] < r[0] / 8.0);
    }
}

TEST_CASE("Weingarten residuals converge at fourth order") {
    for (const char* name : {"sphere", "cylinder", "catenoid", "unduloid"}) {
        std::vector<double> w, a, t;
        for (std::size_t n : {33, 65, 129}) {
            const auto s = make(name, n);
            const auto r = weingarten_residuals(s.immersion, weingarten_split(s.immersion));
            w.push_back(r.weingarten);
            a.push_back(r.anticonformality);
            t.push_back(r.normal_leak);
        }
        CAPTURE(name);
        CHECK(std::log2(w[1] / w[2]) > 3.5);
        CHECK(std::log2(a[1] / a[2]) > 3.5);
        CHECK(std::log2(t[1] / t[2]) > 3.5);
    }
}

TEST_CASE("curvature is invariant under chart rotation") {
    GeneratorParams p;
    p.theta = 0.4;
    const auto a = weingarten_split(make("catenoid", 33).immersion);
    const auto b = weingarten_split(make("catenoid", 33, p).immersion);
    const auto pa = principal_curvatures(a);
    const auto pb = principal_curvatures(b);
    // Center node is a fixed point of the rotation.
    const std::size_t c = a.grid.index(16, 16);
    CHECK(pa[c].second == doctest::Approx(pb[c].second).epsilon(1e-5));
    // |II^{2,0}| is rotation invariant, its argument turns by 2 theta.
    CHECK(std::abs(b.hopf_qd[c]) == doctest::Approx(std::abs(a.hopf_qd[c])).epsilon(1e-6));
    CHECK(std::arg(b.hopf_qd[c] / a.hopf_qd[c]) == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("holomorphic function check measures the Cauchy-Riemann defect") {
    const auto s = make("catenoid", 33);
    const GridChart& g = s.immersion.grid();
    std::vector<Complex> hol(g.size()), anti(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
        hol[n] = std::pow(g.point(n), 2);
        anti[n] = std::conj(g.point(n));
    }
    CHECK(max_abs(holo_function_check(s.immersion, hol)) < 1e-4);
    // a = x, b = -y: sqrt((a_y + b_x)^2 + (a_x - b_y)^2) = 2.
    for (double v : holo_function_check(s.immersion, anti)) CHECK(v == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("unduloid has constant mean curvature 1 / (neck + bulge)") {
    const auto s = make("unduloid", 65);
    const auto c = weingarten_split(s.immersion);
    CHECK(max_dev(c.H, 1.0 / 1.3) < 1e-4);
    REQUIRE(s.mean_curvature.has_value());
    CHECK(*s.mean_curvature == doctest::Approx(1.0 / 1.3));
}

TEST_CASE("ellipsoid of revolution has non-constant mean curvature") {
    const auto s = make("ellipsoid_of_revolution", 33);
    const auto c = weingarten_split(s.immersion);
    const Stats h = stats(c.H);
    CHECK(h.stddev / h.mean > 0.05);
    CHECK(s.immersion.conformality_residual() < 1e-3);
    // Oracle at the equator (beta = 0): k_meridian = a / c^2, k_parallel = 1 / a.
    const GridChart& g = s.immersion.grid();
    const std::size_t eq = g.index(g.nx / 2, g.ny / 2);
    CHECK(c.H[eq] == doctest::Approx(0.5 * (1.0 / 4.0 + 1.0)).epsilon(1e-4));
}
