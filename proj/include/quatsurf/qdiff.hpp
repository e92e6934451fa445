#pragma once

// Quadratic differentials q = phi dz^2 sampled on a chart, and the
// correspondence tau = df \ q between them and anti-conformal tangential
// one-forms.

#include <functional>
#include <optional>
#include <vector>

#include "quatsurf/chart_surface.hpp"

namespace quatsurf {

struct QuadDifferential {
    GridChart grid;
    std::vector<Complex> phi;
    std::vector<char> pole;  // empty or one flag per node

    static QuadDifferential sample(const GridChart& grid, const std::function<Complex(Complex)>& fn);
    static QuadDifferential constant(const GridChart& grid, Complex value);

    bool is_pole(std::size_t node) const { return !pole.empty() && pole[node] != 0; }
    NodeList pole_nodes() const;
    double max_abs() const;
};

QuadDifferential operator*(double s, const QuadDifferential& q);
QuadDifferential operator-(const QuadDifferential& a, const QuadDifferential& b);

// Marks nodes with |phi| > threshold * median |phi| as poles.
void flag_poles(QuadDifferential& q, double threshold);

struct ChartCurve {
    std::vector<Complex> points;
    std::vector<Complex> tangents;

    static ChartCurve row(const GridChart& grid, std::size_t j);
    static ChartCurve segment(Complex a, Complex b, std::size_t samples);
    // Throws ValidationError on repeated points or vanishing tangents.
    void validate() const;
};

// |d phi / d zbar| = |phi_x + i phi_y| / 2 per node.
std::vector<double> cr_residual(const QuadDifferential& q, int stencil_order = 4);

struct Zero {
    std::size_t node = 0;
    Complex point;
    // Winding number of arg phi on the smallest node loop enclosing the
    // cluster; 0 if the loop leaves the grid.
    int multiplicity = 0;
};

struct ZeroLocus {
    NodeList nodes;  // one representative (minimum of |phi|) per zero
    std::vector<Zero> zeros;
    // False if a cluster below the threshold carries no winding or is not
    // small, which cannot happen for a holomorphic q with isolated zeros.
    bool isolated = true;
};

// Clusters of nodes with |phi| < tol * max|phi| (8-connectivity).
// Throws ValidationError("trivial differential") if q vanishes identically.
ZeroLocus zero_locus(const QuadDifferential& q, double tol = 1e-6);

// Horizontal direction theta with phi e^{2i theta} > 0 at a value of phi.
// Throws ValidationError at phi = 0.
double horizontal_angle(Complex phi);

struct StretchDirections {
    std::vector<Complex> horizontal;  // unit chart vectors, phi(v, v) > 0
    std::vector<Complex> vertical;    // unit chart vectors, phi(v, v) < 0
};

// Throws ValidationError naming the first zero node.
StretchDirections stretch_directions(const QuadDifferential& q);

struct NoncharacteristicReport {
    bool noncharacteristic = false;
    double margin_deg = 0.0;  // smallest angle to either foliation along the curve
    std::size_t worst_sample = 0;
    bool meets_zero_locus = false;
};

// Curve samples use phi at the nearest node.  Curves meeting the zero locus
// are reported characteristic.
NoncharacteristicReport noncharacteristic(const ChartCurve& curve, const QuadDifferential& q,
                                          const ChartImmersion& imm, double min_margin_deg = 1.0,
                                          double zero_tol = 1e-6);

// tau = df \ q.
QOneForm form_from_qdiff(const ChartImmersion& imm, const QuadDifferential& q);

// phi = nu_f(fx tau(d/dx)).  Throws ValidationError if tau is not anti-conformal
// and tangential to relative tolerance tol at some node.
QuadDifferential qdiff_from_form(const ChartImmersion& imm, const QOneForm& tau, double tol = 1e-3);

// d tau (d/dx, d/dy) = d/dx tau(d/dy) - d/dy tau(d/dx) per node.
std::vector<Quaternion> exterior_derivative(const GridChart& grid, const std::vector<FormValue>& tau,
                                            int stencil_order = 4);

// |(d(df \ q))^perp| per node.  The tangential part vanishes for any
// holomorphic q; the normal part vanishes iff f is isothermic for q.
std::vector<double> normal_curl(const ChartImmersion& imm, const QOneForm& tau);

}  // namespace quatsurf
