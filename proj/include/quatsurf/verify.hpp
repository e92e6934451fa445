#pragma once

// Invariant suite run by `verify`: residual identities and their observed
// convergence orders on the refinement ladder n, 2n - 1, 4n - 3.

#include <cstddef>
#include <string>
#include <vector>

namespace quatsurf {

struct Check {
    std::string group;
    std::string name;
    double value = 0.0;       // NaN when every residual of an order estimate is at rounding level
    std::string relation;     // "<", ">", ">=" or "=="
    double threshold = 0.0;
    bool pass = false;
    std::vector<double> series;  // residual per ladder level, when the check is an order estimate
};

struct VerifyOptions {
    std::size_t n = 33;
    std::vector<std::string> groups;  // empty: all groups
};

struct VerifyReport {
    std::vector<std::size_t> ladder;
    std::vector<Check> checks;
    bool pass = false;
};

const std::vector<std::string>& verify_groups();

// Throws ValidationError for an unknown group or n < 9 or even n.
VerifyReport run_verification(const VerifyOptions& options);

// Minimum over consecutive levels of log2(r_k / r_{k+1}) for a factor-2 ladder.
// Pairs whose coarser residual is below floor are skipped; NaN when none remain.
double observed_order(const std::vector<double>& series, double floor = 1e-13);

}  // namespace quatsurf
