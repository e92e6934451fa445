#pragma once

// Plain-text exchange formats: CSV fields, OBJ meshes.
//
// CSV files carry a header line.  Node rows may come in any order; the grid
// is recovered from the distinct x and y values, which must be uniformly
// spaced and cover the full tensor product.

#include <iosfwd>
#include <string>
#include <vector>

#include "quatsurf/grid.hpp"
#include "quatsurf/qdiff.hpp"

namespace quatsurf {

struct PositionSamples {
    GridChart grid;
    std::vector<Quaternion> positions;  // imaginary, row-major
};

// Columns x, y, px, py, pz.
PositionSamples read_positions_csv(std::istream& in);
PositionSamples read_positions_csv(const std::string& path);
void write_positions_csv(std::ostream& out, const GridChart& grid, const std::vector<Quaternion>& positions);

// Columns x, y, re_phi, im_phi.
QuadDifferential read_qdiff_csv(std::istream& in);
QuadDifferential read_qdiff_csv(const std::string& path);
void write_qdiff_csv(std::ostream& out, const QuadDifferential& q);

// Columns x, y (one polyline vertex per line).  Tangents from central differences.
ChartCurve read_curve_csv(std::istream& in);
void write_curve_csv(std::ostream& out, const ChartCurve& curve);

// Named scalar columns x, y, name_0, name_1, ... on a grid.
struct ScalarColumn {
    std::string name;
    const std::vector<double>* values = nullptr;
};
void write_fields_csv(std::ostream& out, const GridChart& grid, const std::vector<ScalarColumn>& columns);

// Vertices in row-major node order, two triangles per grid cell: 2 (nx - 1) (ny - 1) faces.
void write_obj(std::ostream& out, const GridChart& grid, const std::vector<Quaternion>& positions,
               const std::string& name = "surface");

// Shortest round-trip decimal representation.
std::string format_double(double v);

// Writes text to path, creating parent directories.  Throws ValidationError on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace quatsurf
