#include "quatsurf/generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include <boost/numeric/odeint.hpp>

#include "quatsurf/errors.hpp"

namespace quatsurf {

namespace {

namespace ode = boost::numeric::odeint;

// Profile of a surface of revolution f = (rho cos s, rho sin s, zeta) with
// rho_v^2 + zeta_v^2 = rho^2, plus the dual height zeta* for q = 1.
struct Profile {
    double rho = 0.0;
    double zeta = 0.0;
    double zeta_star = 0.0;
};

template <class State, class System, class Read>
std::map<double, Profile> integrate_profile(const std::vector<double>& abs_v, State x0, System sys, Read read) {
    std::vector<double> times{0.0};
    for (double v : abs_v) {
        if (v > times.back()) times.push_back(v);
    }
    std::map<double, Profile> out;
    out[0.0] = read(x0);
    if (times.size() == 1) return out;
    auto stepper = ode::make_dense_output(1e-13, 1e-13, ode::runge_kutta_dopri5<State>());
    ode::integrate_times(stepper, sys, x0, times.begin(), times.end(), 1e-3,
                         [&](const State& x, double t) { out[t] = read(x); });
    return out;
}

std::vector<double> sorted_abs(std::vector<double> v) {
    for (auto& t : v) t = std::abs(t);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Profiles at the requested parameters.  Both profiles are even in rho and
// odd in zeta and zeta*, so only |v| is integrated.
std::vector<Profile> rotational_profiles(const std::string& name, const std::vector<double>& vs,
                                         const GeneratorParams& p) {
    const auto abs_v = sorted_abs(vs);
    std::map<double, Profile> table;
    if (name == "unduloid") {
        const double a = p.neck;
        const double b = p.bulge;
        if (!(a > 0.0) || !(b > a)) throw ValidationError("duality", "generators", "unduloid needs 0 < neck < bulge");
        const double H = 1.0 / (a + b);
        const double C = a * b / (a + b);
        using State = std::array<double, 4>;  // rho, rho_v, zeta, zeta*
        const auto sys = [H, C](const State& x, State& dx, double) {
            const double r = x[0];
            const double zv = -(H * r * r + C);
            dx[0] = x[1];
            dx[1] = r - 2.0 * H * r * (H * r * r + C);
            dx[2] = zv;
            dx[3] = zv / (r * r);
        };
        table = integrate_profile(abs_v, State{a, 0.0, 0.0, 0.0}, sys,
                                  [](const State& x) { return Profile{x[0], x[2], x[3]}; });
    } else {
        const double a = p.semi_a;
        const double c = p.semi_c;
        if (!(a > 0.0) || !(c > 0.0)) throw ValidationError("duality", "generators", "ellipsoid semi-axes must be positive");
        using State = std::array<double, 2>;  // beta, zeta*
        const auto sys = [a, c](const State& x, State& dx, double) {
            const double s = std::sin(x[0]);
            const double co = std::cos(x[0]);
            const double bv = a * co / std::sqrt(a * a * s * s + c * c * co * co);
            const double rho = a * co;
            dx[0] = bv;
            dx[1] = -c * co * bv / (rho * rho);
        };
        table = integrate_profile(abs_v, State{0.0, 0.0}, sys, [a, c](const State& x) {
            return Profile{a * std::cos(x[0]), -c * std::sin(x[0]), x[1]};
        });
    }
    std::vector<Profile> out;
    out.reserve(vs.size());
    for (double v : vs) {
        Profile pr = table.at(std::abs(v));
        if (v < 0.0) {
            pr.zeta = -pr.zeta;
            pr.zeta_star = -pr.zeta_star;
        }
        out.push_back(pr);
    }
    return out;
}

bool is_rotational(const std::string& name) { return name == "unduloid" || name == "ellipsoid_of_revolution"; }

void check_name(const std::string& name) {
    const auto& names = generator_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        throw ValidationError("duality", "generators", "unknown generator '" + name + "'");
    }
}

Quaternion enneper_point(Complex w, int m) {
    const double k = 2.0 * m + 1.0;
    const Complex p = std::pow(w, 2 * m + 1) / k;
    return Quaternion::vector(std::real(0.5 * (w - p)), std::real(Complex{0.0, 0.5} * (w + p)),
                              std::real(std::pow(w, m + 1) / (m + 1.0)));
}

Quaternion inverse_stereographic(Complex g) {
    const double a = std::norm(g);
    return Quaternion::vector(2.0 * g.real(), 2.0 * g.imag(), a - 1.0) / (a + 1.0);
}

struct Samples {
    std::vector<Quaternion> f;
    std::vector<Quaternion> dual;
    std::vector<Complex> phi;
    bool has_dual = false;
    bool has_q = false;
};

Samples sample(const std::string& name, const GridChart& grid, const GeneratorParams& p) {
    check_name(name);
    grid.validate();
    const Complex rot = std::polar(1.0, p.theta);
    const Complex rot2 = rot * rot;
    Samples s;
    s.f.resize(grid.size());
    s.dual.resize(grid.size());
    s.phi.assign(grid.size(), rot2);
    s.has_q = true;
    s.has_dual = true;

    if (is_rotational(name)) {
        std::vector<double> vs(grid.size());
        for (std::size_t n = 0; n < grid.size(); ++n) vs[n] = (rot * grid.point(n)).imag();
        const auto prof = rotational_profiles(name, vs, p);
        for (std::size_t n = 0; n < grid.size(); ++n) {
            const double sx = (rot * grid.point(n)).real();
            const auto& pr = prof[n];
            s.f[n] = Quaternion::vector(pr.rho * std::cos(sx), pr.rho * std::sin(sx), pr.zeta);
            s.dual[n] = Quaternion::vector(-std::cos(sx) / pr.rho, -std::sin(sx) / pr.rho, pr.zeta_star);
        }
        return s;
    }

    for (std::size_t n = 0; n < grid.size(); ++n) {
        const Complex w = rot * grid.point(n);
        const double sx = w.real();
        const double v = w.imag();
        if (name == "sphere") {
            s.f[n] = inverse_stereographic(w);
            s.has_dual = false;
        } else if (name == "cylinder") {
            const double r = p.radius;
            if (!(r > 0.0)) throw ValidationError("duality", "generators", "cylinder radius must be positive");
            s.f[n] = Quaternion::vector(r * std::cos(sx / r), r * std::sin(sx / r), -v);
            s.dual[n] = Quaternion::vector(-r * std::cos(sx / r), -r * std::sin(sx / r), -v);
        } else if (name == "catenoid") {
            s.f[n] = Quaternion::vector(std::cosh(v) * std::cos(sx), std::cosh(v) * std::sin(sx), v);
            s.dual[n] = Quaternion::vector(std::cos(sx), std::sin(sx), -std::sinh(v)) / std::cosh(v);
            s.phi[n] = -rot2;
        } else {
            const int m = p.order;
            if (m < 1) throw ValidationError("duality", "generators", "enneper order must be at least 1");
            s.f[n] = enneper_point(w, m);
            s.dual[n] = inverse_stereographic(std::pow(w, m));
            s.phi[n] = -static_cast<double>(m) * std::pow(w, m - 1) * rot2;
        }
    }
    return s;
}

}  // namespace

const std::vector<std::string>& generator_names() {
    static const std::vector<std::string> names{"sphere",   "cylinder", "catenoid",
                                                "enneper",  "unduloid", "ellipsoid_of_revolution"};
    return names;
}

GridChart default_chart(const std::string& name, std::size_t n) {
    check_name(name);
    // The latitude range is four times the angular range; twice the nodes keep
    // the meridian resolution usable on coarse ladders.
    if (name == "ellipsoid_of_revolution") return GridChart::span(-1.0, 1.0, n, -4.0, 4.0, 2 * (n - 1) + 1);
    return GridChart::span(-1.0, 1.0, n, -1.0, 1.0, n);
}

std::vector<Quaternion> generator_positions(const std::string& name, const GridChart& grid,
                                            const GeneratorParams& params) {
    return sample(name, grid, params).f;
}

GeneratedSurface generate(const std::string& name, const GridChart& grid, const GeneratorParams& params,
                          const ImmersionOptions& options) {
    Samples s = sample(name, grid, params);
    GeneratedSurface out{name, build_immersion(grid, std::move(s.f), options), std::nullopt, std::nullopt,
                         std::nullopt, ""};
    if (s.has_q) {
        QuadDifferential q;
        q.grid = grid;
        q.phi = std::move(s.phi);
        out.q = std::move(q);
    }
    if (s.has_dual) out.dual = std::move(s.dual);
    if (name == "sphere") {
        out.mean_curvature = 1.0;
        out.orientation = "inward";
    } else if (name == "cylinder") {
        out.mean_curvature = 0.5 / params.radius;
        out.orientation = "inward";
    } else if (name == "catenoid" || name == "enneper") {
        out.mean_curvature = 0.0;
        out.orientation = "fx x fy";
    } else if (name == "unduloid") {
        out.mean_curvature = 1.0 / (params.neck + params.bulge);
        out.orientation = "inward";
    } else {
        out.orientation = "inward";
    }
    return out;
}

}  // namespace quatsurf
