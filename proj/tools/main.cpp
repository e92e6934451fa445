#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "quatsurf/cli.hpp"

namespace {

void add_common(CLI::App* app, quatsurf::RunConfig& c) {
    app->add_option("--generator", c.generator, "analytic generator")
        ->check(CLI::IsMember(quatsurf::generator_names()));
    app->add_option("--positions", c.positions_csv, "position samples CSV (x,y,px,py,pz)");
    app->add_option("--qdiff", c.qdiff_csv, "quadratic differential CSV (x,y,re_phi,im_phi)");
    app->add_option("--n", c.grid.n, "nodes per axis")->check(CLI::PositiveNumber);
    app->add_option("--xmin", c.grid.xmin);
    app->add_option("--xmax", c.grid.xmax);
    app->add_option("--ymin", c.grid.ymin);
    app->add_option("--ymax", c.grid.ymax);
    app->add_option("--nx", c.grid.nx);
    app->add_option("--ny", c.grid.ny);
    app->add_option("--radius", c.params.radius, "cylinder radius");
    app->add_option("--order", c.params.order, "enneper order m");
    app->add_option("--neck", c.params.neck, "unduloid neck radius");
    app->add_option("--bulge", c.params.bulge, "unduloid bulge radius");
    app->add_option("--semi-a", c.params.semi_a, "ellipsoid equatorial semi-axis");
    app->add_option("--semi-c", c.params.semi_c, "ellipsoid polar semi-axis");
    app->add_option("--theta", c.params.theta, "chart rotation (radians)");
    app->add_option("--stencil-order", c.tol.stencil_order, "finite-difference order");
    app->add_option("--conformality-tol", c.tol.conformality);
    app->add_option("--closedness-tol", c.tol.closedness);
    app->add_option("--holomorphy-tol", c.tol.holomorphy);
    app->add_option("--zero-tol", c.tol.zero);
    app->add_option("--umbilic-tol", c.tol.umbilic);
    app->add_option("--congruence-tol", c.tol.congruence);
    app->add_option("--pole-threshold", c.tol.pole_threshold);
    app->add_option("--output-dir", c.output_dir, "artifact directory (QUATSURF_OUTPUT_DIR overrides)");
    app->add_option("--seed", c.seed);
}

const char* describe(const std::string& command) {
    if (command == "generate") return "sample an analytic surface and its dual";
    if (command == "analyze") return "curvature, Hopf differential, umbilics and residuals";
    if (command == "dual") return "integrate the Christoffel dual for q";
    if (command == "bonnet") return "Bonnet mates from lambda = f* +- eps";
    if (command == "solve-ivp") return "march the isothermic Cauchy problem from a grid row";
    if (command == "verify") return "run the invariant suite";
    if (command == "converge") return "residuals and observed orders on a refinement ladder";
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quaternionic calculus on sampled surfaces"};
    app.require_subcommand(1);
    app.fallthrough();
    quatsurf::RunConfig config;
    bool quiet = false;
    app.add_flag("--quiet", quiet, "do not print the report");

    for (const auto& name : quatsurf::command_names()) {
        auto* sub = app.add_subcommand(name, describe(name));
        add_common(sub, config);
        if (name == "bonnet") sub->add_option("--eps", config.eps, "spin parameter")->check(CLI::NonNegativeNumber);
        if (name == "solve-ivp") {
            sub->add_option("--phi", config.phi, "generator, one, i, minus_one or csv");
            sub->add_option("--row", config.row, "initial curve row");
            sub->add_option("--steps", config.steps, "march steps each way");
        }
        if (name == "verify") {
            sub->add_flag("--all", config.all, "run every check group");
            sub->add_option("--check", config.checks, "check group")->delimiter(',');
        }
        sub->callback([&config, name] { config.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const auto result = quatsurf::run(config);
    if (!quiet || result.exit_code != 0) std::fwrite(result.report.data(), 1, result.report.size(), stdout);
    return result.exit_code;
}
