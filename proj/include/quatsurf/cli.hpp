#pragma once

// Run configuration and dispatcher behind the command-line tool.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quatsurf/generators.hpp"

namespace quatsurf {

struct GridSpec {
    std::size_t n = 33;  // nodes per axis; the generator's default chart is used
    // Explicit chart bounds; when set they replace the default chart.
    std::optional<double> xmin, xmax, ymin, ymax;
    std::optional<std::size_t> nx, ny;
};

struct Tolerances {
    int stencil_order = 4;
    double conformality = 1e-3;
    double closedness = 1e-3;
    double holomorphy = 1e-3;
    double zero = 1e-6;
    double umbilic = 1e-3;
    double congruence = 1e-3;
    double pole_threshold = 20.0;
};

struct RunConfig {
    std::string command;  // generate, analyze, dual, bonnet, solve-ivp, verify, converge

    // Input: a generator, or CSV files.
    std::string generator = "cylinder";
    GeneratorParams params;
    std::optional<std::string> positions_csv;
    std::optional<std::string> qdiff_csv;
    GridSpec grid;
    Tolerances tol;

    double eps = 1.0;  // bonnet

    // solve-ivp: q is "generator" (the generator's own q), "one", "i", "minus_one" or "csv".
    std::string phi = "generator";
    std::optional<std::size_t> row;  // default: middle row
    std::size_t steps = 16;

    // verify
    bool all = false;
    std::vector<std::string> checks;

    std::optional<std::string> output_dir;  // QUATSURF_OUTPUT_DIR overrides
    std::uint64_t seed = 0;
};

const std::vector<std::string>& command_names();

struct Artifact {
    std::string name;  // file name relative to the output directory
    std::string content;
};

struct RunResult {
    int exit_code = 0;                // 0 pass, 1 validation error, 2 numerical failure or failed checks
    std::string report;               // JSON, newline-terminated
    std::vector<Artifact> artifacts;  // report included
    std::optional<std::string> output_dir;
};

// Canonical JSON of the configuration (sorted keys) and its FNV-1a hash.
std::string canonical_config(const RunConfig& config);
std::string config_hash(const RunConfig& config);

// Inverse of canonical_config; missing keys keep their defaults and
// output_dir is accepted.  Throws ValidationError for unknown keys.
RunConfig config_from_json(const std::string& text);

// Runs one command and returns the report and artifacts.  Errors are caught
// and returned as an error report with the matching exit code.  When an
// output directory is configured every artifact is written there.
RunResult run(const RunConfig& config);

}  // namespace quatsurf
