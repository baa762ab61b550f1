#pragma once

#include "gazewalk/record.hpp"
#include "gazewalk/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace gazewalk {

inline constexpr Scalar kDefaultNoData = -9999.0;

// Regular planar grid. values is row-major with row 0 the northernmost row,
// matching ASCII-grid body order; origin is the lower-left (south-west)
// corner of the grid extent.
struct GridField {
    Vec2 origin = Vec2::Zero();
    Scalar cell = 0.5;
    int ncols = 0;
    int nrows = 0;
    VecX values;
    Scalar nodata = kDefaultNoData;

    Scalar& at(int row, int col) { return values[row * ncols + col]; }
    Scalar at(int row, int col) const { return values[row * ncols + col]; }
    Vec2 cell_center(int row, int col) const {
        return {origin.x() + (col + 0.5) * cell, origin.y() + (nrows - row - 0.5) * cell};
    }
    bool operator==(const GridField& other) const;
};

GridField make_field(const Vec2& origin, Scalar cell, int ncols, int nrows, Scalar fill,
                     Scalar nodata = kDefaultNoData);

// Grid covering the area's boundary bounding box, anchored at its grid origin.
GridField field_for_area(const ObservationArea& area, Scalar fill,
                         Scalar nodata = kDefaultNoData);

struct RouteAttribute {
    std::string record_id;
    std::vector<Vec2> polyline;
    Scalar attribute = 0.0;
};

// Closed-boundary segment-rectangle test; touching an edge or corner counts.
bool segment_intersects_rect(const Vec2& a, const Vec2& b, Scalar xmin, Scalar ymin, Scalar xmax,
                             Scalar ymax);

// Per cell, the unweighted mean attribute of the distinct records whose
// polyline intersects the cell; a route re-entering a cell still counts once.
// Cells no route touches hold nodata.
GridField rasterize_mean(const std::vector<RouteAttribute>& routes, const GridField& grid);

struct KernelSpec {
    std::string shape = "quartic";
    Scalar bandwidth = 2.0;  // meters
};

enum class KdeMode {
    Normalized,  // (3/pi)(1-u^2)^2 / h^2 per unit weight; mass integrates to w
    Raw          // (1-u^2)^2 per unit weight, matching unnormalized renderers
};

struct WeightedPoint {
    Vec2 position = Vec2::Zero();
    Scalar weight = 1.0;
};

// Kernel density at cell centers. Compact support is exact: cells farther
// than the bandwidth from every point are exactly zero.
GridField kde(const std::vector<WeightedPoint>& points, const GridField& grid,
              const KernelSpec& kernel, KdeMode mode = KdeMode::Normalized);

void export_ascii_grid(const GridField& field, std::ostream& out);
GridField import_ascii_grid(std::istream& in);
void export_geojson(const GridField& field, std::ostream& out);

}  // namespace gazewalk
