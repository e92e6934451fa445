#pragma once

// Analytic test surfaces in isothermal coordinates.
//
// All generators accept a chart rotation theta: the sample at z is taken at
// e^{i theta} z of the base parametrization, so the quadratic differentials
// pick up the factor e^{2 i theta}.  Normal orientation is N = fx x fy / |.|:
//
//   sphere     stereographic, inward normal, H = 1
//   cylinder   (r cos(x/r), r sin(x/r), -y), inward normal, H = 1/(2r)
//   catenoid   (cosh y cos x, cosh y sin x, y), H = 0, Hopf coefficient +1
//   enneper    Weierstrass data g = z^m, eta = dz, Hopf coefficient m z^{m-1}
//   unduloid   Delaunay surface with neck a and bulge b, inward normal, H = 1/(a+b)
//   ellipsoid_of_revolution   semi-axes a (equatorial) and c (polar), isothermal latitude
//
// Rotational generators come with the rotational dual for q = 1; the catenoid
// and Enneper surfaces with the Gauss map as dual for q = -Hopf.

#include <optional>
#include <string>
#include <vector>

#include "quatsurf/chart_surface.hpp"
#include "quatsurf/qdiff.hpp"

namespace quatsurf {

struct GeneratorParams {
    double radius = 1.0;       // cylinder
    int order = 1;             // enneper
    double neck = 0.3;         // unduloid
    double bulge = 1.0;        // unduloid
    double semi_a = 1.0;       // ellipsoid equatorial
    double semi_c = 2.0;       // ellipsoid polar
    double theta = 0.0;        // chart rotation
};

struct GeneratedSurface {
    std::string name;
    ChartImmersion immersion;
    std::optional<QuadDifferential> q;               // holomorphic q with an exact dual
    std::optional<std::vector<Quaternion>> dual;     // closed-form dual for q
    std::optional<double> mean_curvature;            // when constant
    std::string orientation;
};

const std::vector<std::string>& generator_names();

// Default chart of a generator with n nodes per axis.
GridChart default_chart(const std::string& name, std::size_t n);

// Closed-form positions only (no frame), for tests and CSV export.
std::vector<Quaternion> generator_positions(const std::string& name, const GridChart& grid,
                                            const GeneratorParams& params = {});

GeneratedSurface generate(const std::string& name, const GridChart& grid, const GeneratorParams& params = {},
                          const ImmersionOptions& options = {});

}  // namespace quatsurf
