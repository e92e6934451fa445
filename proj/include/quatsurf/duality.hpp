#pragma once

// Christoffel duals df* = df \ q of isothermic immersions.

#include <optional>
#include <string>
#include <vector>

#include "quatsurf/chart_surface.hpp"
#include "quatsurf/qdiff.hpp"

namespace quatsurf {

struct DualOptions {
    std::optional<std::size_t> basepoint;    // default: lower-left node
    Quaternion base_value;                   // f*(basepoint)
    double closedness_tol = 1e-3;            // relative, see DualResult
    double holomorphy_tol = 1e-3;            // relative CR residual of q
    double zero_tol = 1e-6;                  // branch (zero) detection, relative to max |phi|
    double pole_threshold = 20.0;            // pole flag: stretch > threshold * median
};

struct DualResult {
    std::vector<Quaternion> fstar;
    // Dual immersion with the exact frame (tau(d/dx), tau(d/dy)).
    ChartImmersion immersion;
    std::vector<Quaternion> closedness_residual;  // d tau (d/dx, d/dy)
    double closedness = 0.0;                      // |d tau| / |D tau| over the chart
    double path_deviation = 0.0;
    QuadDifferential q;
    NodeList branch_nodes;
    NodeList pole_nodes;
    std::vector<double> stretch;  // |phi| / e^{2u}, the ratio of conformal factors
    std::vector<double> Hstar;    // NaN at branch nodes
    std::size_t basepoint = 0;
};

// Throws ValidationError for q = 0 or a non-holomorphic q, NumericalError
// ("not isothermic for this q") when df \ q is not closed.
DualResult integrate_dual(const ChartImmersion& imm, const QuadDifferential& q, const DualOptions& options = {});

struct DualityReport {
    double classical = 0.0;          // |dN - H* df* + H df| / |dN|, H* fitted pointwise
    double commutator = 0.0;         // |df* ^ omega - omega ^ df*| / (|df*| |omega|)
    double real_multiple = 0.0;      // |omega - a df*| / |omega|, a fitted pointwise
    double fit_vs_dual_H = 0.0;      // |H*_fit - H*| / |H*|, H* from the dual's curvature
    double multiple_vs_dual_H = 0.0; // |a - H*| / |H*|
    double normal_flip = 0.0;        // max |N* + N| off branch nodes
    double path_deviation = 0.0;
    std::vector<double> hstar_fit;
    std::vector<double> multiple;
};

// df* is recomputed by finite differences of dual.fstar.
DualityReport verify_duality(const ChartImmersion& imm, const DualResult& dual, const CurvatureData& curv);

enum class ChristoffelKind { dual_pair, scaling, unrelated };
std::string to_string(ChristoffelKind kind);

struct ChristoffelClassification {
    ChristoffelKind kind = ChristoffelKind::unrelated;
    double normal_misalignment = 0.0;  // max |N_a x N_b|
    double conformal_fraction = 0.0;   // |(df_b)_c| / |df_b| w.r.t. N_a
    double anticonformal_fraction = 0.0;
    Complex scale;                     // mean of nu_a(df_b(d/dx) fx_a^{-1})
    double scale_spread = 0.0;         // max |u - mean u| / |mean u|
    double metric_ratio_spread = 0.0;  // stddev / mean of |df_b| / |df_a|
    // Dual pair whose conformal factors are not proportional: the minimal case.
    bool minimal_exception = false;
};

ChristoffelClassification classify_christoffel(const ChartImmersion& a, const ChartImmersion& b, double tol = 1e-3);

}  // namespace quatsurf
