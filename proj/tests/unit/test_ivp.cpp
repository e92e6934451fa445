#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "doctest.h"

#include "quatsurf/alignment.hpp"
#include "quatsurf/duality.hpp"
#include "quatsurf/errors.hpp"
#include "quatsurf/generators.hpp"
#include "quatsurf/ivp.hpp"
#include "quatsurf/qdiff.hpp"

using namespace quatsurf;

namespace {

constexpr std::size_t kSteps = 16;

GeneratorParams rotated() {
    GeneratorParams p;
    p.theta = 0.25 * std::numbers::pi;
    return p;
}

// Cylinder with q = i in the rotated chart: the middle row is noncharacteristic.
CauchyProblem cylinder_problem(std::size_t rows, std::vector<Quaternion> mu = {}) {
    const auto g = generate("cylinder", strip_chart(rows, kSteps), rotated());
    return CauchyProblem::make(g.immersion, *g.q, (rows - 1) / 2, std::move(mu));
}

double lambda_error(const MarchResult& m) {
    double e = 0.0;
    for (const auto& l : m.lambda.lambda) e = std::max(e, (l - Quaternion(1.0)).norm());
    return e;
}

// mu = 1 + delta * bump(x) * unit along C.
std::vector<Quaternion> bumped(const CauchyProblem& p, double delta, Quaternion unit, double centre = 0.0) {
    const auto& g = p.background.grid();
    std::vector<Quaternion> mu;
    for (std::size_t i = 0; i < g.nx; ++i) {
        const double x = g.x(i) - centre;
        mu.push_back(Quaternion(1.0) + (delta * std::exp(-4.0 * x * x)) * unit);
    }
    return mu;
}

}  // namespace

TEST_CASE("symbol is linear in the covector and matches its definition") {
    const auto g = generate("cylinder", default_chart("cylinder", 17), rotated());
    const auto tau = form_from_qdiff(g.immersion, *g.q);
    const std::size_t node = g.immersion.grid().index(8, 8);
    const auto zero = symbol(g.immersion, tau, node, {0.0, 0.0});
    for (double v : zero.matrix) CHECK(v == 0.0);
    CHECK(zero.kernel_dim == 4);

    const double r = 1.0 / std::sqrt(2.0);
    const auto s = symbol(g.immersion, tau, node, {r, r});
    const auto s2 = symbol(g.immersion, tau, node, {2 * r, 2 * r});
    for (std::size_t k = 0; k < 16; ++k) CHECK(s2.matrix[k] == doctest::Approx(2.0 * s.matrix[k]));

    const auto& fx = g.immersion.fx()[node];
    const auto& fy = g.immersion.fy()[node];
    const auto& N = g.immersion.normal()[node];
    const Quaternion A = r * fx - r * fy;
    const Quaternion B = r * tau[node].ay - r * tau[node].ax;
    CHECK((s.A - A).norm() < 1e-14);
    CHECK((s.B - B).norm() < 1e-14);
    const Quaternion basis[4] = {Quaternion(1, 0, 0, 0), Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0),
                                 Quaternion(0, 0, 0, 1)};
    for (int c = 0; c < 4; ++c) {
        const Quaternion a = basis[c];
        const Quaternion img = Quaternion(((a * B).imag() * N).real()) + (A * a).imag();
        const double col[4] = {img.w, img.x, img.y, img.z};
        for (int row = 0; row < 4; ++row) CHECK(s.matrix[4 * row + c] == doctest::Approx(col[row]).epsilon(1e-12));
    }
}

TEST_CASE("characteristic variety is the stretch directions") {
    const std::size_t n = 33;
    const auto g = generate("cylinder", default_chart("cylinder", n), rotated());
    const auto tau = form_from_qdiff(g.immersion, *g.q);
    const std::size_t node = g.immersion.grid().index(n / 2, n / 2);
    const auto z = symbol_zeros(g.immersion, tau, *g.q, node);
    REQUIRE(z.angles.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(z.stretch_errors_deg[k] < 1e-3);
        const auto s = symbol(g.immersion, tau, node, {std::cos(z.angles[k]), std::sin(z.angles[k])}, 1e-6);
        CHECK(std::abs(s.normalized_det) < 1e-8);
        CHECK(s.kernel_dim >= 1);
    }
    // Away from the zeros the symbol is invertible.
    const auto off = symbol(g.immersion, tau, node, {0.0, 1.0});
    CHECK(std::abs(off.normalized_det) > 0.1);
    CHECK(off.kernel_dim == 0);
}

TEST_CASE("well-posedness of the initial row") {
    const auto prob = cylinder_problem(33);
    const auto w = check_wellposed(prob);
    CHECK(w.wellposed);
    CHECK(w.angle_margin_deg == doctest::Approx(45.0).epsilon(1e-6));
    CHECK_FALSE(w.meets_zero_locus);

    const auto axis = generate("cylinder", default_chart("cylinder", 33));
    const auto bad = CauchyProblem::make(axis.immersion, *axis.q, 16);
    CHECK_FALSE(check_wellposed(bad).wellposed);
    CHECK_THROWS_AS(march_solve(bad, 2), ValidationError);
    // arg phi = pi: still characteristic.
    const auto flipped = CauchyProblem::make(axis.immersion, -1.0 * *axis.q, 16);
    CHECK_FALSE(check_wellposed(flipped).wellposed);
}

TEST_CASE("march argument checks") {
    const auto prob = cylinder_problem(33);
    CHECK_THROWS_AS(march_solve(prob, 1), ValidationError);
    CHECK_THROWS_AS(march_solve(prob, kSteps, 0.5), ValidationError);
    CHECK_THROWS_AS(march_solve(prob, 40), ValidationError);
    CHECK_THROWS_AS(strip_chart(4, kSteps), ValidationError);
    const auto m = march_solve(prob, kSteps);
    CHECK(m.strip.ny == 2 * kSteps + 1);
    CHECK(m.strip.nx == 33);
    CHECK(m.steps == kSteps);
}

TEST_CASE("manufactured solution lambda = 1 converges") {
    double prev_l = 0.0, prev_f = 0.0;
    for (std::size_t rows : {33u, 65u}) {
        const auto prob = cylinder_problem(rows);
        const auto m = march_solve(prob, kSteps);
        const auto rec = reconstruct(prob, m);
        const double el = lambda_error(m);
        const auto fit = scale_translation_fit(rec.ftilde.position(), rec.background.position());
        CHECK(el < 1e-6);
        CHECK(rec.initial_mismatch < 1e-12);
        CHECK(rec.closedness < 1e-6);
        CHECK(rec.dual_curl < 1e-3);
        const auto r = system_residuals(prob, m);
        CHECK(r.closedness < 1e-6);
        CHECK(r.scalar < 1e-6);
        if (prev_l > 0.0) {
            CHECK(prev_l / el > 8.0);
            CHECK(prev_f / fit.rms > 8.0);
        }
        prev_l = el;
        prev_f = fit.rms;
    }
}

TEST_CASE("smooth perturbations of the Cauchy data respond linearly") {
    const auto base = cylinder_problem(65);
    const auto m0 = march_solve(base, kSteps);
    const Quaternion dir(0.0, 0.3, -0.2, 0.5);
    auto response = [&](double delta) {
        const auto p = cylinder_problem(65, bumped(base, delta, dir));
        const auto m = march_solve(p, kSteps);
        double r = 0.0;
        for (std::size_t k = 0; k < m.lambda.lambda.size(); ++k) {
            r = std::max(r, (m.lambda.lambda[k] - m0.lambda.lambda[k]).norm());
        }
        return r;
    };
    const double r1 = response(1e-3), r2 = response(2e-3);
    CHECK(r1 > 1e-4);
    CHECK(r1 < 1e-2);
    CHECK(r2 / r1 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("the solution depends on four real functions of the curve") {
    const auto base = cylinder_problem(33);
    const auto m0 = march_solve(base, kSteps);
    const Quaternion units[4] = {Quaternion(1, 0, 0, 0), Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0),
                                 Quaternion(0, 0, 0, 1)};
    const std::size_t size = m0.lambda.lambda.size();
    Eigen::MatrixXd D(4 * size, 4);
    for (int c = 0; c < 4; ++c) {
        const auto p = cylinder_problem(33, bumped(base, 1e-4, units[c], 0.1));
        const auto m = march_solve(p, kSteps);
        for (std::size_t k = 0; k < size; ++k) {
            const Quaternion d = m.lambda.lambda[k] - m0.lambda.lambda[k];
            D(4 * k, c) = d.w;
            D(4 * k + 1, c) = d.x;
            D(4 * k + 2, c) = d.y;
            D(4 * k + 3, c) = d.z;
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(D);
    const auto sv = svd.singularValues();
    CHECK(sv(3) / sv(0) > 1e-2);
}

TEST_CASE("generic Cauchy data gives an isothermic immersion") {
    const Quaternion dir(0.2, 0.5, -0.3, 0.4);
    const auto coarse = cylinder_problem(65);
    const auto fine_base = cylinder_problem(129);
    const auto coarse_rec = [&] {
        const auto p = cylinder_problem(65, bumped(coarse, 0.05, dir));
        return reconstruct(p, march_solve(p, kSteps));
    }();
    const auto prob = cylinder_problem(129, bumped(fine_base, 0.05, dir));
    const auto m = march_solve(prob, kSteps);
    const auto rec = reconstruct(prob, m);
    CHECK(coarse_rec.closedness < 1e-2);
    CHECK(coarse_rec.closedness / rec.closedness > 3.5);
    CHECK(coarse_rec.dual_curl / rec.dual_curl > 3.5);
    CHECK(rec.initial_mismatch < 1e-12);
    CHECK(rec.dual_curl < 1e-2);
    const auto fit = scale_translation_fit(rec.ftilde.position(), rec.background.position());
    CHECK(fit.rms / rec.background.diameter() > 1e-4);

    const auto q = QuadDifferential::constant(m.strip, prob.q.phi[0]);
    DualOptions o;
    o.closedness_tol = 1e-2;
    const auto dual = integrate_dual(rec.ftilde, q, o);
    CHECK(dual.branch_nodes.empty());

    ReconstructOptions ro;
    ro.basepoint = m.strip.index(5, 7);
    const auto moved = reconstruct(prob, m, ro);
    const Quaternion t = moved.ftilde.position()[0] - rec.ftilde.position()[0];
    double dev = 0.0;
    for (std::size_t k = 0; k < m.strip.size(); ++k) {
        dev = std::max(dev, (moved.ftilde.position()[k] - rec.ftilde.position()[k] - t).norm());
    }
    CHECK(dev < 1e-10 * rec.ftilde.diameter());
}
