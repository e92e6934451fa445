#include <cmath>

#include "doctest.h"

#include "quatsurf/alignment.hpp"
#include "quatsurf/bonnet.hpp"
#include "quatsurf/errors.hpp"
#include "quatsurf/fields.hpp"
#include "quatsurf/generators.hpp"
#include "quatsurf/qdiff.hpp"

using namespace quatsurf;

namespace {

GeneratedSurface surface(const std::string& name, std::size_t n, const GeneratorParams& p = {}) {
    return generate(name, default_chart(name, n), p);
}

SpinField constant_spin(const GridChart& g, Quaternion q) { return SpinField{std::vector<Quaternion>(g.size(), q)}; }

}  // namespace

TEST_CASE("constant spin fields rotate and scale") {
    const auto g = surface("catenoid", 33);
    const Quaternion unit = Quaternion(1.0, 2.0, -1.0, 0.5) * (1.0 / std::sqrt(6.25));
    const auto rot = spin_integrate(g.immersion, constant_spin(g.immersion.grid(), unit));
    CHECK(rot.closedness < 1e-10);
    CHECK(rot.metric_residual < 1e-12);
    const auto& f = g.immersion.position();
    const auto& ft = rot.immersion.position();
    const std::size_t base = 0;
    for (std::size_t n = 0; n < f.size(); ++n) {
        const Quaternion expect = unit.conj() * (f[n] - f[base]) * unit + f[base];
        CHECK((ft[n] - expect).norm() < 1e-5);
    }
    const auto big = spin_integrate(g.immersion, constant_spin(g.immersion.grid(), Quaternion(2.0)));
    const auto fit = scale_translation_fit(big.immersion.position(), f);
    CHECK(fit.scale == doctest::Approx(0.25));
    CHECK(fit.rms < 1e-5);
}

TEST_CASE("spin field validation") {
    const auto g = surface("cylinder", 9);
    CHECK_THROWS_AS(constant_spin(g.immersion.grid(), Quaternion(0.0)).validate(), NumericalError);
    auto lam = constant_spin(g.immersion.grid(), Quaternion(1.0));
    lam.lambda[3] = Quaternion(std::nan(""), 0, 0, 0);
    CHECK_THROWS_AS(lam.validate(), ValidationError);
    // A generic lambda does not give a closed form.
    SpinField wild;
    for (std::size_t n = 0; n < g.immersion.grid().size(); ++n) {
        const auto& p = g.immersion.position()[n];
        wild.lambda.push_back(Quaternion(1.0, p.z, 0.0, 0.0));
    }
    CHECK_THROWS_AS(spin_integrate(g.immersion, wild), NumericalError);
}

TEST_CASE("Bonnet mates of the cylinder") {
    const auto g = surface("cylinder", 65);
    const auto dual = integrate_dual(g.immersion, *g.q);
    CHECK_THROWS_AS(bonnet_pair(g.immersion, dual, -1.0), ValidationError);
    for (double eps : {0.5, 2.0}) {
        const auto pair = bonnet_pair(g.immersion, dual, eps);
        CHECK(pair.metric_residual < 1e-12);
        CHECK(pair.H_relative < 1e-3);
        // f* is imaginary, so |f* + eps| = |f* - eps|.
        CHECK(pair.lambda_norm_gap < 1e-12);
        CHECK(pair.normal_recovery < 1e-10);
        CHECK(pair.congruence_rms / pair.diameter > 1e-3);
        CHECK_FALSE(pair.congruent);
    }
}

TEST_CASE("gauge identity for the spin transform") {
    const auto g = surface("cylinder", 33);
    const auto dual = integrate_dual(g.immersion, *g.q);
    const auto pair = bonnet_pair(g.immersion, dual, 1.0);
    const auto& ft = pair.fplus;
    const auto q = QuadDifferential::sample(ft.grid(), [](Complex z) { return 1.0 + 0.3 * z; });
    const auto tau = form_from_qdiff(ft, q);
    const auto r = gauge_check(g.immersion, pair.lambda_plus, tau.values);
    CHECK(max_abs(r) < 1e-10);
    // tau itself is conformal w.r.t. f~ only if it is the differential.
    const std::vector<FormValue> conformal = ft.differential();
    CHECK_THROWS_AS(gauge_check(g.immersion, pair.lambda_plus, conformal), ValidationError);
}

TEST_CASE("cmc eps on field data") {
    const auto grid = GridChart::span(-1, 1, 33, -1, 1, 33);
    std::vector<double> H, G, flat(grid.size(), 2.0), wrong(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const double x = grid.x(grid.col(n)), y = grid.y(grid.row(n));
        G.push_back(1.0 + x * x + 0.5 * y * y);
        H.push_back(0.5 * (G.back() + 0.49));
        wrong[n] = std::sin(3.0 * x) + y;
    }
    const auto found = cmc_eps_uniqueness(grid, H, G);
    REQUIRE(found.eps);
    CHECK(*found.eps == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(found.c == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(found.misfit < 1e-8);

    const auto still = cmc_eps_uniqueness(grid, flat, G);
    CHECK(still.flat);
    CHECK_FALSE(still.eps);

    CHECK_FALSE(cmc_eps_uniqueness(grid, wrong, G).eps);

    std::vector<double> negative(H);
    for (auto& h : negative) h = -h;
    CHECK_FALSE(cmc_eps_uniqueness(grid, negative, G).eps);
}

TEST_CASE("cmc eps rejects minimal surfaces") {
    const auto g = surface("catenoid", 33);
    const auto dual = integrate_dual(g.immersion, *g.q);
    CHECK_THROWS_AS(cmc_eps_uniqueness(g.immersion, dual), ValidationError);
}

TEST_CASE("umbilics of the mates sit at the branch point of the dual") {
    GeneratorParams p;
    p.order = 2;
    const auto g = surface("enneper", 65, p);
    DualOptions o;
    o.base_value = g.dual->front();
    const auto dual = integrate_dual(g.immersion, *g.q, o);
    const auto pair = bonnet_pair(g.immersion, dual, 1.0);
    const auto c = umbilic_branch_correspondence(pair, dual, 1e-3);
    const std::size_t centre = g.immersion.grid().index(32, 32);
    REQUIRE(c.branch_nodes.size() == 1);
    CHECK(c.branch_nodes[0] == centre);
    CHECK(c.coincide);
    CHECK(c.umbilics_plus == c.branch_nodes);
    CHECK(c.umbilics_minus == c.branch_nodes);
    CHECK(c.distortion_zeros == c.branch_nodes);
    CHECK(shape_distortion_check(g.immersion, dual, pair) < 1e-3);
}

TEST_CASE("first fundamental form of the conformal cylinder") {
    const auto g = surface("cylinder", 33, {.radius = 1.0});
    for (const auto& m : first_fundamental_form(g.immersion)) {
        CHECK(m.E == doctest::Approx(1.0).epsilon(1e-4));
        CHECK(m.G == doctest::Approx(1.0).epsilon(1e-4));
        CHECK(std::abs(m.F) < 1e-4);
    }
}
