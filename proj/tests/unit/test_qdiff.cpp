#include <cmath>
#include <numbers>

#include "doctest.h"

#include "quatsurf/errors.hpp"
#include "quatsurf/fields.hpp"
#include "quatsurf/generators.hpp"
#include "quatsurf/qdiff.hpp"

using namespace quatsurf;

namespace {

constexpr double kPi = std::numbers::pi;

GridChart unit_chart(std::size_t n = 33) { return GridChart::span(-1, 1, n, -1, 1, n); }

}  // namespace

TEST_CASE("Cauchy-Riemann residual") {
    const auto g = unit_chart();
    const auto hol = QuadDifferential::sample(g, [](Complex z) { return z * z - 2.0 * z; });
    CHECK(max_abs(cr_residual(hol)) < 1e-12);
    // d/dzbar of zbar is 1.
    const auto anti = QuadDifferential::sample(g, [](Complex z) { return std::conj(z); });
    for (double v : cr_residual(anti)) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("zero locus and multiplicities") {
    const auto g = unit_chart();
    const auto z1 = zero_locus(QuadDifferential::sample(g, [](Complex z) { return z; }));
    REQUIRE(z1.zeros.size() == 1);
    CHECK(z1.zeros[0].node == g.index(16, 16));
    CHECK(z1.zeros[0].multiplicity == 1);
    CHECK(z1.isolated);

    const auto z2 = zero_locus(QuadDifferential::sample(g, [](Complex z) { return z * z; }), 1e-3);
    REQUIRE(z2.zeros.size() == 1);
    CHECK(z2.zeros[0].multiplicity == 2);

    const auto pair = zero_locus(QuadDifferential::sample(g, [](Complex z) { return (z - 0.5) * (z + 0.5); }));
    REQUIRE(pair.zeros.size() == 2);
    CHECK(pair.zeros[0].multiplicity == 1);
    CHECK(pair.zeros[1].multiplicity == 1);

    CHECK(zero_locus(QuadDifferential::constant(g, {0.0, 2.0})).zeros.empty());
    CHECK_THROWS_AS(zero_locus(QuadDifferential::constant(g, 0.0)), ValidationError);
}

TEST_CASE("horizontal angle makes phi e^{2 i theta} positive") {
    CHECK(horizontal_angle(1.0) == doctest::Approx(0.0));
    CHECK(horizontal_angle({0.0, 1.0}) == doctest::Approx(-kPi / 4.0));
    for (double a : {0.3, 1.7, -2.9, 3.1}) {
        const Complex phi = std::polar(2.5, a);
        const Complex v = phi * std::polar(1.0, 2.0 * horizontal_angle(phi));
        CHECK(std::abs(v.imag()) < 1e-12);
        CHECK(v.real() > 0.0);
    }
    CHECK_THROWS_AS(horizontal_angle(0.0), ValidationError);
}

TEST_CASE("stretch directions are orthogonal with phi(v, v) of opposite signs") {
    const auto g = unit_chart(9);
    const auto q = QuadDifferential::sample(g, [](Complex z) { return std::exp(z); });
    const auto s = stretch_directions(q);
    for (std::size_t n = 0; n < g.size(); ++n) {
        const Complex h = s.horizontal[n], v = s.vertical[n];
        CHECK(std::abs(std::abs(h) - 1.0) < 1e-12);
        CHECK(std::abs((std::conj(h) * v).real()) < 1e-12);
        const Complex ph = q.phi[n] * h * h, pv = q.phi[n] * v * v;
        CHECK(ph.real() > 0.0);
        CHECK(pv.real() < 0.0);
        CHECK(std::abs(ph.imag()) < 1e-12 * std::abs(ph));
    }
    const auto zeroed = QuadDifferential::sample(g, [](Complex z) { return z; });
    CHECK_THROWS_AS(stretch_directions(zeroed), ValidationError);
}

TEST_CASE("noncharacteristic rows") {
    const auto g = unit_chart();
    const auto s = generate("cylinder", g);
    const auto row = ChartCurve::row(g, 16);
    const auto one = noncharacteristic(row, QuadDifferential::constant(g, 1.0), s.immersion);
    CHECK_FALSE(one.noncharacteristic);
    CHECK(one.margin_deg == doctest::Approx(0.0).scale(1.0));
    const auto i = noncharacteristic(row, QuadDifferential::constant(g, {0.0, 1.0}), s.immersion);
    CHECK(i.noncharacteristic);
    CHECK(i.margin_deg == doctest::Approx(45.0));
    // arg phi = pi turns both foliations by 90 degrees: the row is then
    // tangent to the vertical foliation and stays characteristic.
    const auto minus = noncharacteristic(row, QuadDifferential::constant(g, -1.0), s.immersion);
    CHECK_FALSE(minus.noncharacteristic);
    const auto through = noncharacteristic(row, QuadDifferential::sample(g, [](Complex z) { return z; }), s.immersion);
    CHECK(through.meets_zero_locus);
    CHECK_FALSE(through.noncharacteristic);
}

TEST_CASE("tau = df \\ q is anti-conformal, tangential and invertible") {
    const auto s = generate("catenoid", unit_chart());
    const auto q = QuadDifferential::sample(s.immersion.grid(), [](Complex z) { return 1.0 + z * z; });
    const auto tau = form_from_qdiff(s.immersion, q);
    CHECK(tau.kind == FormKind::anticonformal);
    CHECK(tau.tangential);
    for (std::size_t n = 0; n < tau.size(); ++n) {
        const auto& N = s.immersion.normal()[n];
        CHECK(anticonformality_defect(tau[n], N) < 1e-13);
        CHECK(transversal_fraction(tau[n], N) < 1e-13);
        // nu_f(fx tau(d/dx)) = phi.
        CHECK(std::abs(nu(s.immersion.fx()[n] * tau[n].ax, N) - q.phi[n]) < 1e-12);
    }
    const auto back = qdiff_from_form(s.immersion, tau);
    for (std::size_t n = 0; n < q.phi.size(); ++n) CHECK(std::abs(back.phi[n] - q.phi[n]) < 1e-12);

    QOneForm df;
    df.values = s.immersion.differential();
    CHECK_THROWS_AS(qdiff_from_form(s.immersion, df), ValidationError);
}

TEST_CASE("exterior derivative of a sampled differential vanishes") {
    const auto s = generate("unduloid", default_chart("unduloid", 33));
    const auto d = exterior_derivative(s.immersion.grid(), s.immersion.differential());
    CHECK(l2(std::span<const Quaternion>(d)) < 1e-10);
}

TEST_CASE("normal curl detects the isothermic q") {
    const auto s = generate("cylinder", unit_chart());
    const auto& g = s.immersion.grid();
    auto curl = [&](const QuadDifferential& q) { return max_abs(normal_curl(s.immersion, form_from_qdiff(s.immersion, q))); };
    CHECK(curl(QuadDifferential::constant(g, 1.0)) < 1e-3);
    CHECK(curl(QuadDifferential::constant(g, {0.0, 1.0})) > 0.1);
    CHECK(curl(QuadDifferential::sample(g, [](Complex z) { return z; })) > 0.1);
    // The tangential part vanishes for every holomorphic q.
    const auto tau = form_from_qdiff(s.immersion, QuadDifferential::sample(g, [](Complex z) { return z; }));
    const auto d = exterior_derivative(g, tau.values);
    for (std::size_t n = 0; n < d.size(); ++n) {
        const auto& N = s.immersion.normal()[n];
        CHECK((0.5 * (d[n] + N * d[n] * N)).norm() < 1e-3);
    }
}

TEST_CASE("pole flags and arithmetic") {
    const auto g = unit_chart(9);
    auto q = QuadDifferential::sample(g, [](Complex z) { return 1.0 / (z - Complex(1.02, 0.0)); });
    flag_poles(q, 20.0);
    const auto poles = q.pole_nodes();
    REQUIRE_FALSE(poles.empty());
    for (auto n : poles) CHECK(g.col(n) == g.nx - 1);
    const auto c = QuadDifferential::constant(g, 2.0);
    const auto d = 0.5 * c - QuadDifferential::constant(g, 1.0);
    CHECK(d.max_abs() == doctest::Approx(0.0));
}
