#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "quatsurf/chart_surface.hpp"
#include "quatsurf/cli.hpp"
#include "quatsurf/errors.hpp"
#include "quatsurf/generators.hpp"
#include "quatsurf/verify.hpp"

namespace py = pybind11;
using namespace quatsurf;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

GridChart chart(const std::string& name, std::size_t n, std::optional<std::array<double, 4>> bounds) {
    if (!bounds) return default_chart(name, n);
    const auto& b = *bounds;
    return GridChart::span(b[0], b[1], n, b[2], b[3], n);
}

// (ny, nx, 3) array of the imaginary parts.
Array to_array(const GridChart& g, const std::vector<Quaternion>& p) {
    Array a({g.ny, g.nx, std::size_t{3}});
    auto m = a.mutable_unchecked<3>();
    for (std::size_t n = 0; n < g.size(); ++n) {
        m(g.row(n), g.col(n), 0) = p[n].x;
        m(g.row(n), g.col(n), 1) = p[n].y;
        m(g.row(n), g.col(n), 2) = p[n].z;
    }
    return a;
}

Array to_array(const GridChart& g, const std::vector<double>& v) {
    Array a({g.ny, g.nx});
    auto m = a.mutable_unchecked<2>();
    for (std::size_t n = 0; n < g.size(); ++n) m(g.row(n), g.col(n)) = v[n];
    return a;
}

py::array_t<std::complex<double>> to_complex_array(const GridChart& g, const std::vector<Complex>& v) {
    py::array_t<std::complex<double>> a({g.ny, g.nx});
    auto m = a.mutable_unchecked<2>();
    for (std::size_t n = 0; n < g.size(); ++n) m(g.row(n), g.col(n)) = v[n];
    return a;
}

py::tuple run_json(const std::string& config) {
    RunResult r;
    {
        const RunConfig c = config_from_json(config);
        py::gil_scoped_release release;
        r = run(c);
    }
    py::dict artifacts;
    for (const auto& a : r.artifacts) artifacts[py::str(a.name)] = py::bytes(a.content);
    return py::make_tuple(r.exit_code, r.report, artifacts);
}

py::dict curvature(Array positions, std::array<double, 4> bounds, int stencil_order) {
    if (positions.ndim() != 3 || positions.shape(2) != 3) {
        throw ValidationError("python", "curvature", "positions must have shape (ny, nx, 3)");
    }
    const auto ny = static_cast<std::size_t>(positions.shape(0));
    const auto nx = static_cast<std::size_t>(positions.shape(1));
    const auto g = GridChart::span(bounds[0], bounds[1], nx, bounds[2], bounds[3], ny);
    const auto m = positions.unchecked<3>();
    std::vector<Quaternion> p(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
        p[n] = Quaternion::vector(m(g.row(n), g.col(n), 0), m(g.row(n), g.col(n), 1), m(g.row(n), g.col(n), 2));
    }
    ImmersionOptions o;
    o.stencil_order = stencil_order;
    const auto imm = build_immersion(g, std::move(p), o);
    const auto curv = weingarten_split(imm);
    py::dict out;
    out["H"] = to_array(g, curv.H);
    out["hopf"] = to_complex_array(g, curv.hopf_qd);
    out["metric"] = to_array(g, curv.metric);
    out["normal"] = to_array(g, imm.normal());
    out["conformality_residual"] = imm.conformality_residual();
    out["umbilics"] = umbilics(curv, 1e-3);
    return out;
}

}  // namespace

PYBIND11_MODULE(_quatsurf, m) {
    m.doc() = "Quaternionic calculus on sampled conformal surfaces";

    static py::exception<ValidationError> validation(m, "ValidationError", PyExc_ValueError);
    static py::exception<NumericalError> numerical(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ValidationError& e) {
            py::set_error(validation, e.what());
        } catch (const NumericalError& e) {
            py::set_error(numerical, e.what());
        }
    });

    m.def("generator_names", &generator_names);
    m.def("command_names", &command_names);
    m.def("verify_groups", &verify_groups);

    m.def(
        "generator_positions",
        [](const std::string& name, std::size_t n, std::optional<std::array<double, 4>> bounds, double theta,
           double radius, int order) {
            GeneratorParams p;
            p.theta = theta;
            p.radius = radius;
            p.order = order;
            const auto g = chart(name, n, bounds);
            return to_array(g, generator_positions(name, g, p));
        },
        py::arg("name"), py::arg("n") = 33, py::arg("bounds") = py::none(), py::arg("theta") = 0.0,
        py::arg("radius") = 1.0, py::arg("order") = 1,
        "Closed-form samples of a generator as an (ny, nx, 3) array.");

    m.def(
        "default_bounds",
        [](const std::string& name, std::size_t n) {
            const auto g = default_chart(name, n);
            return std::array<double, 4>{g.x(0), g.x(g.nx - 1), g.y(0), g.y(g.ny - 1)};
        },
        py::arg("name"), py::arg("n") = 33);

    m.def("curvature", &curvature, py::arg("positions"), py::arg("bounds"), py::arg("stencil_order") = 4,
          "Mean curvature, Hopf coefficient, metric and normal of sampled positions.");

    m.def("run_json", &run_json, py::arg("config"),
          "Runs one command from a JSON configuration; returns (exit_code, report, artifacts).");
}
