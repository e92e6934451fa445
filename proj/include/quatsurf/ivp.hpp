#pragma once

// The isothermic Cauchy problem: find a spin field lambda with lambda = mu on
// a grid row C such that f~ with d f~ = conj(lambda) df lambda is isothermic
// for the same holomorphic q as the background f.
//
// With theta = Im(d lambda lambda^{-1}), tau = df \ q and omega the Hopf form
// of f, lambda solves
//   Im(conj(lambda) fx lambda_y) = Im(conj(lambda) fy lambda_x)                 (3 equations)
//   <theta_x x tau_y - theta_y x tau_x, N> = (<omega_y, tau_x> - <omega_x, tau_y>) / 2   (1 equation)
// which is solved for lambda_y row by row.

#include <array>
#include <optional>
#include <vector>

#include "quatsurf/bonnet.hpp"
#include "quatsurf/chart_surface.hpp"
#include "quatsurf/qdiff.hpp"

namespace quatsurf {

struct CauchyProblem {
    ChartImmersion background;
    QuadDifferential q;
    std::size_t row = 0;             // initial curve C: grid row index
    std::vector<Quaternion> mu;      // Cauchy data on C (default: 1)
    QOneForm tau;                    // df \ q
    std::vector<FormValue> omega;    // Hopf form of the background
    std::vector<double> zero_order;  // right-hand side of the scalar equation at lambda = 1

    // Builds tau and omega from the background.  mu defaults to 1.
    static CauchyProblem make(ChartImmersion background, QuadDifferential q, std::size_t row,
                              std::vector<Quaternion> mu = {});

    // Initial data df~ = conj(mu) df mu along C, per row node.
    std::vector<FormValue> initial_frame() const;
};

struct SymbolMap {
    std::array<double, 16> matrix{};  // row-major, acting on (w, x, y, z)
    Quaternion A;
    Quaternion B;
    double det = 0.0;
    double normalized_det = 0.0;  // det / (|A|^3 |B|)
    int kernel_dim = 0;
};

// alpha -> Re(Im(alpha B) N) + Im(A alpha) with A = xi2 fx - xi1 fy, B = xi1 tau_y - xi2 tau_x.
SymbolMap symbol(const ChartImmersion& imm, const QOneForm& tau, std::size_t node, std::array<double, 2> xi,
                 double rank_tol = 1e-8);

struct AngularZeros {
    std::vector<double> angles;  // covector angles in [0, 2 pi) where det sigma vanishes
    std::vector<double> stretch_errors_deg;  // distance of each zero to the nearest stretch direction
};

// Zeros of xi -> det sigma(1, xi) on the unit circle located on a sweep of
// `samples` angles and refined by golden-section search.
AngularZeros symbol_zeros(const ChartImmersion& imm, const QOneForm& tau, const QuadDifferential& q, std::size_t node,
                          std::size_t samples = 3600);

struct WellposedReport {
    bool wellposed = false;
    double det_margin = 0.0;    // min over C of |det sigma(1, dy)| / (|A|^3 |B|)
    double angle_margin_deg = 0.0;
    std::size_t worst_node = 0;
    bool meets_zero_locus = false;
};

WellposedReport check_wellposed(const CauchyProblem& prob, double min_det = 1e-6, double min_angle_deg = 1.0);

struct MarchOptions {
    double condition_limit = 1e8;
    double min_lambda = 1e-8;  // relative to max |mu|
    int stencil_order = 2;     // central differences for lambda_x along the row
};

struct MarchResult {
    GridChart strip;          // rows row - steps .. row + steps, columns first_col .. nx - 1 - first_col
    std::size_t first_row = 0;
    std::size_t first_col = 0;
    SpinField lambda;         // on the strip
    double max_condition = 0.0;
    std::size_t steps = 0;
};

// Marches steps rows in each direction from C with Heun's method.  Only central
// differences are used along the row, so every stage drops the outer stencil
// half-width on both sides and the strip is the part of the chart determined
// by the data on C.  h_march must equal the row spacing of the background grid
// (defaults to it).  Throws ValidationError for a characteristic curve or a
// strip narrower than 5 columns and NumericalError when a linear system is
// ill-conditioned or lambda degenerates.
MarchResult march_solve(const CauchyProblem& prob, std::size_t steps, std::optional<double> h_march = std::nullopt,
                        const MarchOptions& options = {});

// Chart with n rows on [-1, 1] and square cells, widened in x so that a
// strip of `steps` rows each way around the middle row keeps n columns.
GridChart strip_chart(std::size_t n, std::size_t steps, int stencil_order = 2);

struct ReconstructOptions {
    std::optional<std::size_t> basepoint;  // on the strip; default lower-left
    double closedness_tol = 1e-2;
};

struct Reconstruction {
    ChartImmersion ftilde;          // on the strip
    ChartImmersion background;      // background restricted to the strip
    double initial_mismatch = 0.0;  // max |df~ - phi0| on C
    double closedness = 0.0;        // |Im(conj(lambda) df ^ d lambda)| relative
    double dual_curl = 0.0;         // |d(df~ \ q)| / |D(df~ \ q)|
    double dual_curl_tangential = 0.0;
    double path_deviation = 0.0;
};

Reconstruction reconstruct(const CauchyProblem& prob, const MarchResult& march, const ReconstructOptions& options = {});

// Residuals of both equations at the interior strip nodes for the marched lambda.
struct SystemResiduals {
    double closedness = 0.0;  // max |Im(conj(lambda) df ^ d lambda)|
    double scalar = 0.0;      // max |<C, N> - W/4|
};
SystemResiduals system_residuals(const CauchyProblem& prob, const MarchResult& march);

}  // namespace quatsurf
