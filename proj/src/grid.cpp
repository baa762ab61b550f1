#include "gazewalk/grid.hpp"

#include "gazewalk/csv.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace gazewalk {

bool GridField::operator==(const GridField& other) const {
    return origin == other.origin && cell == other.cell && ncols == other.ncols &&
           nrows == other.nrows && nodata == other.nodata && values.size() == other.values.size() &&
           values == other.values;
}

GridField make_field(const Vec2& origin, Scalar cell, int ncols, int nrows, Scalar fill,
                     Scalar nodata) {
    if (cell <= 0.0) throw Error("bad_input", "grid cell size must be > 0");
    if (ncols < 1 || nrows < 1) throw Error("bad_input", "grid must have >= 1 column and row");
    GridField f;
    f.origin = origin;
    f.cell = cell;
    f.ncols = ncols;
    f.nrows = nrows;
    f.nodata = nodata;
    f.values = VecX::Constant(static_cast<Eigen::Index>(ncols) * nrows, fill);
    return f;
}

GridField field_for_area(const ObservationArea& area, Scalar fill, Scalar nodata) {
    Vec2 max_corner = area.boundary.front();
    for (const Vec2& v : area.boundary) max_corner = max_corner.cwiseMax(v);
    const int ncols = std::max(
        1, static_cast<int>(std::ceil((max_corner.x() - area.grid_origin.x()) / area.grid_cell)));
    const int nrows = std::max(
        1, static_cast<int>(std::ceil((max_corner.y() - area.grid_origin.y()) / area.grid_cell)));
    return make_field(area.grid_origin, area.grid_cell, ncols, nrows, fill, nodata);
}

bool segment_intersects_rect(const Vec2& a, const Vec2& b, Scalar xmin, Scalar ymin, Scalar xmax,
                             Scalar ymax) {
    // Liang-Barsky with non-strict rejection, so boundary touches survive.
    const Scalar dx = b.x() - a.x();
    const Scalar dy = b.y() - a.y();
    Scalar t0 = 0.0, t1 = 1.0;
    const Scalar p[4] = {-dx, dx, -dy, dy};
    const Scalar q[4] = {a.x() - xmin, xmax - a.x(), a.y() - ymin, ymax - a.y()};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) return false;
        } else {
            const Scalar r = q[i] / p[i];
            if (p[i] < 0.0)
                t0 = std::max(t0, r);
            else
                t1 = std::min(t1, r);
            if (t0 > t1) return false;
        }
    }
    return true;
}

GridField rasterize_mean(const std::vector<RouteAttribute>& routes, const GridField& grid) {
    GridField sums = grid;
    sums.values.setZero();
    std::vector<long> counts(static_cast<std::size_t>(grid.ncols) * grid.nrows, 0);

    const Scalar x0 = grid.origin.x();
    const Scalar y0 = grid.origin.y();
    auto col_of = [&](Scalar x) { return static_cast<int>(std::floor((x - x0) / grid.cell)); };
    auto row_of = [&](Scalar y) {
        return grid.nrows - 1 - static_cast<int>(std::floor((y - y0) / grid.cell));
    };

    for (const RouteAttribute& route : routes) {
        if (route.polyline.empty()) continue;
        std::set<int> cells;
        auto visit_segment = [&](const Vec2& a, const Vec2& b) {
            const int c_lo = std::max(0, col_of(std::min(a.x(), b.x())) - 1);
            const int c_hi = std::min(grid.ncols - 1, col_of(std::max(a.x(), b.x())) + 1);
            const int r_lo = std::max(0, row_of(std::max(a.y(), b.y())) - 1);
            const int r_hi = std::min(grid.nrows - 1, row_of(std::min(a.y(), b.y())) + 1);
            for (int r = r_lo; r <= r_hi; ++r) {
                const Scalar ymin = y0 + (grid.nrows - r - 1) * grid.cell;
                for (int c = c_lo; c <= c_hi; ++c) {
                    const Scalar xmin = x0 + c * grid.cell;
                    if (segment_intersects_rect(a, b, xmin, ymin, xmin + grid.cell,
                                                ymin + grid.cell))
                        cells.insert(r * grid.ncols + c);
                }
            }
        };
        if (route.polyline.size() == 1)
            visit_segment(route.polyline[0], route.polyline[0]);
        else
            for (std::size_t i = 0; i + 1 < route.polyline.size(); ++i)
                visit_segment(route.polyline[i], route.polyline[i + 1]);
        for (int idx : cells) {
            sums.values[idx] += route.attribute;
            ++counts[static_cast<std::size_t>(idx)];
        }
    }

    GridField out = grid;
    for (Eigen::Index i = 0; i < out.values.size(); ++i)
        out.values[i] = counts[static_cast<std::size_t>(i)] > 0
                            ? sums.values[i] / static_cast<Scalar>(counts[static_cast<std::size_t>(i)])
                            : grid.nodata;
    return out;
}

GridField kde(const std::vector<WeightedPoint>& points, const GridField& grid,
              const KernelSpec& kernel, KdeMode mode) {
    if (kernel.shape != "quartic")
        throw Error("bad_input", "unsupported kernel shape: " + kernel.shape);
    if (!(kernel.bandwidth > 0.0)) throw Error("bad_input", "bandwidth must be > 0");
    for (const WeightedPoint& p : points)
        if (p.weight < 0.0) throw Error("bad_input", "kde weights must be >= 0");

    const Scalar h = kernel.bandwidth;
    GridField out = grid;
    out.values.setZero();
    const Scalar x0 = grid.origin.x();
    const Scalar y0 = grid.origin.y();

    for (const WeightedPoint& p : points) {
        // Cell window generously covering the kernel support; the u > 1 test
        // below enforces the exact boundary.
        const int c_lo = std::max(
            0, static_cast<int>(std::floor((p.position.x() - h - x0) / grid.cell)) - 1);
        const int c_hi = std::min(
            grid.ncols - 1,
            static_cast<int>(std::ceil((p.position.x() + h - x0) / grid.cell)) + 1);
        const int south = static_cast<int>(std::floor((p.position.y() - h - y0) / grid.cell)) - 1;
        const int north = static_cast<int>(std::ceil((p.position.y() + h - y0) / grid.cell)) + 1;
        const int r_lo = std::max(0, grid.nrows - 1 - north);
        const int r_hi = std::min(grid.nrows - 1, grid.nrows - 1 - std::max(0, south));
        for (int r = r_lo; r <= r_hi; ++r) {
            for (int c = c_lo; c <= c_hi; ++c) {
                const Scalar u = (out.cell_center(r, c) - p.position).norm() / h;
                if (u > 1.0) continue;
                const Scalar shape = (1.0 - u * u) * (1.0 - u * u);
                out.at(r, c) += mode == KdeMode::Normalized
                                    ? p.weight * (3.0 / M_PI) * shape / (h * h)
                                    : p.weight * shape;
            }
        }
    }
    return out;
}

void export_ascii_grid(const GridField& field, std::ostream& out) {
    out << "ncols " << field.ncols << '\n';
    out << "nrows " << field.nrows << '\n';
    out << "xllcorner " << csv::format_double(field.origin.x()) << '\n';
    out << "yllcorner " << csv::format_double(field.origin.y()) << '\n';
    out << "cellsize " << csv::format_double(field.cell) << '\n';
    out << "NODATA_value " << csv::format_double(field.nodata) << '\n';
    for (int r = 0; r < field.nrows; ++r) {
        for (int c = 0; c < field.ncols; ++c) {
            if (c > 0) out << ' ';
            out << csv::format_double(field.at(r, c));
        }
        out << '\n';
    }
    if (!out) throw Error("io", "failed writing ASCII grid");
}

GridField import_ascii_grid(std::istream& in) {
    auto read_header = [&](const std::string& expect) {
        std::string key;
        std::string value;
        if (!(in >> key >> value)) throw Error("parse", "ASCII grid: truncated header");
        std::string lower = key;
        std::transform(lower.begin(), lower.end(), lower.begin(),
                       [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
        if (lower != expect) throw Error("parse", "ASCII grid: expected " + expect + ", got " + key);
        const auto parsed = csv::parse_double(value);
        if (!parsed) throw Error("parse", "ASCII grid: bad value for " + expect);
        return *parsed;
    };
    GridField f;
    f.ncols = static_cast<int>(read_header("ncols"));
    f.nrows = static_cast<int>(read_header("nrows"));
    f.origin.x() = read_header("xllcorner");
    f.origin.y() = read_header("yllcorner");
    f.cell = read_header("cellsize");
    f.nodata = read_header("nodata_value");
    if (f.ncols < 1 || f.nrows < 1 || f.cell <= 0.0)
        throw Error("parse", "ASCII grid: invalid dimensions");
    f.values.resize(static_cast<Eigen::Index>(f.ncols) * f.nrows);
    for (Eigen::Index i = 0; i < f.values.size(); ++i) {
        std::string token;
        if (!(in >> token)) throw Error("parse", "ASCII grid: truncated body");
        const auto parsed = csv::parse_double(token);
        if (!parsed) throw Error("parse", "ASCII grid: bad cell value '" + token + "'");
        f.values[i] = *parsed;
    }
    return f;
}

void export_geojson(const GridField& field, std::ostream& out) {
    nlohmann::json features = nlohmann::json::array();
    for (int r = 0; r < field.nrows; ++r) {
        for (int c = 0; c < field.ncols; ++c) {
            const Scalar v = field.at(r, c);
            if (v == field.nodata) continue;
            const Scalar x = field.origin.x() + c * field.cell;
            const Scalar y = field.origin.y() + (field.nrows - r - 1) * field.cell;
            nlohmann::json geom = {
                {"type", "Polygon"},
                {"coordinates",
                 {{{x, y},
                   {x + field.cell, y},
                   {x + field.cell, y + field.cell},
                   {x, y + field.cell},
                   {x, y}}}}};
            features.push_back({{"type", "Feature"},
                                {"geometry", geom},
                                {"properties", {{"value", v}, {"row", r}, {"col", c}}}});
        }
    }
    nlohmann::json doc = {{"type", "FeatureCollection"}, {"features", features}};
    out << doc.dump(2) << '\n';
    if (!out) throw Error("io", "failed writing GeoJSON grid");
}

}  // namespace gazewalk
