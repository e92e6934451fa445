#include "quatsurf/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "quatsurf/errors.hpp"

namespace quatsurf {

namespace {

using Table = std::vector<std::vector<double>>;

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream s(line);
    while (std::getline(s, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    return out;
}

double parse_double(const std::string& s, const char* op, std::size_t line) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ValidationError("io", op, "bad number '" + s + "' on line " + std::to_string(line));
    }
    return v;
}

// Reads a CSV with the expected header, one row of doubles per line.
Table read_table(std::istream& in, const std::vector<std::string>& header, const char* op) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("io", op, "empty input");
    if (split(line) != header) {
        std::string want;
        for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
        throw ValidationError("io", op, "expected header '" + want + "'");
    }
    Table rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split(line);
        if (cells.size() != header.size()) {
            throw ValidationError("io", op, "wrong column count on line " + std::to_string(lineno));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse_double(c, op, lineno));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::ifstream open_input(const std::string& path, const char* op) {
    std::ifstream in(path);
    if (!in) throw ValidationError("io", op, "cannot open '" + path + "'");
    return in;
}

// Distinct values of a uniformly spaced coordinate.
std::vector<double> axis(const Table& rows, std::size_t col, const char* op) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(r[col]);
    std::sort(v.begin(), v.end());
    const double span = v.empty() ? 0.0 : v.back() - v.front();
    const double tol = 1e-9 * std::max(span, 1.0);
    std::vector<double> out;
    for (double x : v) {
        if (out.empty() || x - out.back() > tol) out.push_back(x);
    }
    if (out.size() < 2) throw ValidationError("io", op, "need at least two distinct coordinates per axis");
    const double h = (out.back() - out.front()) / static_cast<double>(out.size() - 1);
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (std::abs(out[k] - (out.front() + static_cast<double>(k) * h)) > 1e-6 * h) {
            throw ValidationError("io", op, "coordinates are not uniformly spaced");
        }
    }
    return out;
}

struct GriddedTable {
    GridChart grid;
    std::vector<std::size_t> node;  // grid node of each row
};

GriddedTable grid_table(const Table& rows, const char* op) {
    const auto xs = axis(rows, 0, op);
    const auto ys = axis(rows, 1, op);
    GriddedTable out;
    out.grid = GridChart::span(xs.front(), xs.back(), xs.size(), ys.front(), ys.back(), ys.size());
    out.grid.validate();
    if (rows.size() != out.grid.size()) {
        throw ValidationError("io", op,
                              "expected " + std::to_string(out.grid.size()) + " nodes, got " + std::to_string(rows.size()));
    }
    std::vector<char> seen(out.grid.size(), 0);
    for (const auto& r : rows) {
        const std::size_t n = out.grid.nearest(r[0], r[1]);
        if (seen[n]) throw ValidationError("io", op, "duplicate node", n);
        seen[n] = 1;
        out.node.push_back(n);
    }
    return out;
}

void write_row(std::ostream& out, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) out << ',';
        out << format_double(v);
        first = false;
    }
    out << '\n';
}

}  // namespace

std::string format_double(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    if (v == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

PositionSamples read_positions_csv(std::istream& in) {
    const Table rows = read_table(in, {"x", "y", "px", "py", "pz"}, "read_positions_csv");
    const auto gt = grid_table(rows, "read_positions_csv");
    PositionSamples out{gt.grid, std::vector<Quaternion>(gt.grid.size())};
    for (std::size_t k = 0; k < rows.size(); ++k) {
        out.positions[gt.node[k]] = Quaternion::vector(rows[k][2], rows[k][3], rows[k][4]);
    }
    return out;
}

PositionSamples read_positions_csv(const std::string& path) {
    auto in = open_input(path, "read_positions_csv");
    return read_positions_csv(in);
}

void write_positions_csv(std::ostream& out, const GridChart& grid, const std::vector<Quaternion>& positions) {
    if (positions.size() != grid.size()) throw ValidationError("io", "write_positions_csv", "size mismatch");
    out << "x,y,px,py,pz\n";
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const auto& p = positions[n];
        write_row(out, {grid.x(grid.col(n)), grid.y(grid.row(n)), p.x, p.y, p.z});
    }
}

QuadDifferential read_qdiff_csv(std::istream& in) {
    const Table rows = read_table(in, {"x", "y", "re_phi", "im_phi"}, "read_qdiff_csv");
    const auto gt = grid_table(rows, "read_qdiff_csv");
    QuadDifferential q;
    q.grid = gt.grid;
    q.phi.resize(gt.grid.size());
    for (std::size_t k = 0; k < rows.size(); ++k) q.phi[gt.node[k]] = {rows[k][2], rows[k][3]};
    return q;
}

QuadDifferential read_qdiff_csv(const std::string& path) {
    auto in = open_input(path, "read_qdiff_csv");
    return read_qdiff_csv(in);
}

void write_qdiff_csv(std::ostream& out, const QuadDifferential& q) {
    if (q.phi.size() != q.grid.size()) throw ValidationError("io", "write_qdiff_csv", "size mismatch");
    out << "x,y,re_phi,im_phi\n";
    for (std::size_t n = 0; n < q.grid.size(); ++n) {
        write_row(out, {q.grid.x(q.grid.col(n)), q.grid.y(q.grid.row(n)), q.phi[n].real(), q.phi[n].imag()});
    }
}

ChartCurve read_curve_csv(std::istream& in) {
    const Table rows = read_table(in, {"x", "y"}, "read_curve_csv");
    if (rows.size() < 2) throw ValidationError("io", "read_curve_csv", "a curve needs at least two points");
    ChartCurve c;
    for (const auto& r : rows) c.points.emplace_back(r[0], r[1]);
    const std::size_t m = c.points.size();
    c.tangents.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t a = k == 0 ? 0 : k - 1;
        const std::size_t b = k + 1 == m ? m - 1 : k + 1;
        c.tangents[k] = c.points[b] - c.points[a];
    }
    c.validate();
    return c;
}

void write_curve_csv(std::ostream& out, const ChartCurve& curve) {
    out << "x,y\n";
    for (const auto& p : curve.points) write_row(out, {p.real(), p.imag()});
}

void write_fields_csv(std::ostream& out, const GridChart& grid, const std::vector<ScalarColumn>& columns) {
    out << "x,y";
    for (const auto& c : columns) {
        if (c.values == nullptr || c.values->size() != grid.size()) {
            throw ValidationError("io", "write_fields_csv", "column '" + c.name + "' does not match the grid");
        }
        out << ',' << c.name;
    }
    out << '\n';
    for (std::size_t n = 0; n < grid.size(); ++n) {
        out << format_double(grid.x(grid.col(n))) << ',' << format_double(grid.y(grid.row(n)));
        for (const auto& c : columns) out << ',' << format_double((*c.values)[n]);
        out << '\n';
    }
}

void write_obj(std::ostream& out, const GridChart& grid, const std::vector<Quaternion>& positions,
               const std::string& name) {
    if (positions.size() != grid.size()) throw ValidationError("io", "write_obj", "size mismatch");
    out << "o " << name << '\n';
    for (const auto& p : positions) {
        out << "v " << format_double(p.x) << ' ' << format_double(p.y) << ' ' << format_double(p.z) << '\n';
    }
    for (std::size_t j = 0; j + 1 < grid.ny; ++j) {
        for (std::size_t i = 0; i + 1 < grid.nx; ++i) {
            // OBJ indices are 1-based.
            const std::size_t a = grid.index(i, j) + 1;
            const std::size_t b = grid.index(i + 1, j) + 1;
            const std::size_t c = grid.index(i + 1, j + 1) + 1;
            const std::size_t d = grid.index(i, j + 1) + 1;
            out << "f " << a << ' ' << b << ' ' << c << '\n';
            out << "f " << a << ' ' << c << ' ' << d << '\n';
        }
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ValidationError("io", "write_text_file", "cannot write '" + path + "'");
    out << text;
    if (!out) throw ValidationError("io", "write_text_file", "write failed for '" + path + "'");
}

}  // namespace quatsurf
