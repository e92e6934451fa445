#pragma once

// Spin transforms d f~ = conj(lambda) df lambda and the Bonnet mates
// f+- obtained from lambda = f* +- eps.

#include <optional>
#include <vector>

#include "quatsurf/chart_surface.hpp"
#include "quatsurf/duality.hpp"
#include "quatsurf/qdiff.hpp"

namespace quatsurf {

struct SpinField {
    std::vector<Quaternion> lambda;

    // Throws ValidationError if lambda is not finite and NumericalError if it
    // vanishes relative to its maximum.
    void validate(double tol = 1e-12) const;
    double min_abs() const;
};

// |Im(conj(lambda) df ^ d lambda)(d/dx, d/dy)| per node; zero iff
// conj(lambda) df lambda is closed.
std::vector<double> spin_closedness(const ChartImmersion& imm, const SpinField& lam);

struct SpinOptions {
    std::optional<std::size_t> basepoint;   // default: lower-left node
    std::optional<Quaternion> base_value;   // default: f(basepoint)
    double closedness_tol = 1e-3;           // |Im(...)| / (|lambda| |df| (|d lambda| + |lambda| / extent))
};

struct SpinResult {
    ChartImmersion immersion;
    double closedness = 0.0;
    double path_deviation = 0.0;
    double metric_residual = 0.0;  // |I~ - |lambda|^4 I| / |I~|
};

// Frame conj(lambda) df lambda computed pointwise, positions by path integration.
SpinResult spin_integrate(const ChartImmersion& imm, const SpinField& lam, const SpinOptions& options = {});

// First fundamental form (E, F, G) per node.
struct Metric {
    double E = 0.0;
    double F = 0.0;
    double G = 0.0;
};
std::vector<Metric> first_fundamental_form(const ChartImmersion& imm);

struct BonnetOptions {
    std::optional<std::size_t> basepoint;
    double closedness_tol = 1e-3;
    // Non-congruence threshold on the aligned RMS, relative to the diameter.
    double congruence_tol = 1e-3;
};

struct BonnetPair {
    double eps = 0.0;
    SpinField lambda_plus, lambda_minus;
    ChartImmersion fplus, fminus;
    CurvatureData curv_plus, curv_minus;
    std::vector<double> Hplus, Hminus;
    std::vector<Metric> Iplus, Iminus;
    QuadDifferential D;  // (II+ - II-)^{2,0}

    double metric_residual = 0.0;    // |I+ - I-| / |I+|
    double H_difference = 0.0;       // max |H+ - H-|
    double H_relative = 0.0;         // max |H+ - H-| / max |H+|
    double lambda_norm_gap = 0.0;    // max ||lambda+| - |lambda-||
    double normal_recovery = 0.0;    // max |N - lambda N+- lambda^{-1}|
    double D_cr_residual = 0.0;      // |dD/dzbar| / |dD/dz| over the chart
    double congruence_rms = 0.0;     // RMS after optimal rigid alignment of f+ onto f-
    double diameter = 0.0;
    bool congruent = false;
};

// Throws ValidationError for eps < 0 and NumericalError ("eps on the
// singular sphere") if a lambda vanishes.
BonnetPair bonnet_pair(const ChartImmersion& imm, const DualResult& dual, double eps, const BonnetOptions& options = {});

// |df \ D - 4 eps *df*| / |4 eps *df*|.
double shape_distortion_check(const ChartImmersion& imm, const DualResult& dual, const BonnetPair& pair);
double shape_distortion_check(const ChartImmersion& imm, const DualResult& dual, const BonnetPair& pair,
                              const QuadDifferential& D);

struct CorrespondenceReport {
    NodeList umbilics_plus;
    NodeList umbilics_minus;
    NodeList distortion_zeros;
    NodeList branch_nodes;
    bool coincide = false;
};

CorrespondenceReport umbilic_branch_correspondence(const BonnetPair& pair, const DualResult& dual, double tol);

// Per node |df \ nu_f^{-1}(nu_f~(df~ tau~)) - lambda tau~ conj(lambda)|, relative
// to |lambda tau~ conj(lambda)|, with f~ the spin transform of f by lambda.
// Throws ValidationError if tau~ is not anti-conformal tangential w.r.t. f~.
std::vector<double> gauge_check(const ChartImmersion& imm, const SpinField& lam, const std::vector<FormValue>& tau_tilde,
                                double tol = 1e-3);

struct CmcEpsResult {
    std::optional<double> eps;
    double c = 0.0;          // least-squares dH = c d|f*|^2
    double misfit = 0.0;     // |dH - c dg| / |dH|
    double spread = 0.0;     // relative spread of H/c - |f*|^2
    bool flat = false;       // dH vanishes to tolerance
};

// eps with H = c (|f*|^2 + eps^2), if one exists.  Throws ValidationError for a
// minimal immersion.
CmcEpsResult cmc_eps_uniqueness(const ChartImmersion& imm, const DualResult& dual, double tol = 1e-3);
// Same on field data: mean curvature H and g = |f*|^2 sampled on grid.
CmcEpsResult cmc_eps_uniqueness(const GridChart& grid, const std::vector<double>& H, const std::vector<double>& g,
                                double tol = 1e-3, int stencil_order = 4);

}  // namespace quatsurf
