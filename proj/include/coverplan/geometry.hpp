#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace coverplan {

/// Thrown when an input value or structure violates a documented precondition.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when a planner cannot produce a result for an otherwise valid input.
class PlannerError : public std::runtime_error {
public:
    explicit PlannerError(const std::string& what) : std::runtime_error(what) {}
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
double norm(Point2 p);
double dist(Point2 a, Point2 b);
double dist2(Point2 a, Point2 b);
double cross(Point2 a, Point2 b);
double dot(Point2 a, Point2 b);
bool is_finite(Point2 p);

struct BBox {
    Point2 min;
    Point2 max;
    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }
    double diagonal() const;
    void expand(double m);
};

/// Simple polygon, vertices in order, implicitly closed.
struct Polygon {
    std::vector<Point2> vertices;

    double signed_area() const;
    double area() const;
    BBox bbox() const;

    /// Requires >= 3 vertices, finite coordinates, nonzero area and no
    /// properly crossing edge pairs (vertex touches are tolerated).
    void validate() const;
};

/// Search domain: outer boundary, opaque obstacle regions, sensor radius r.
struct EnvironmentMap {
    Polygon boundary;
    std::vector<Polygon> obstacles;
    double detection_radius = 0.0;

    void validate() const;
    BBox bbox() const { return boundary.bbox(); }
    /// Inside the boundary and outside every obstacle. Points on the boundary
    /// edge count as inside; points on an obstacle edge count as blocked.
    bool free_contains(Point2 p) const;
};

/// Axis-aligned binary grid. Cell (ix, iy) spans
/// [origin + (ix, iy)*cell_size, origin + (ix+1, iy+1)*cell_size), iy along +y.
struct RasterGrid {
    Point2 origin;
    double cell_size = 0.0;
    int width = 0;
    int height = 0;
    std::vector<uint8_t> cells;

    RasterGrid() = default;
    RasterGrid(Point2 org, double cell, int w, int h)
        : origin(org), cell_size(cell), width(w), height(h),
          cells(static_cast<size_t>(w) * h, 0) {}

    bool in_bounds(int ix, int iy) const {
        return ix >= 0 && ix < width && iy >= 0 && iy < height;
    }
    uint8_t at(int ix, int iy) const { return cells[static_cast<size_t>(iy) * width + ix]; }
    void set(int ix, int iy, uint8_t v = 1) { cells[static_cast<size_t>(iy) * width + ix] = v; }
    Point2 center(int ix, int iy) const {
        return {origin.x + (ix + 0.5) * cell_size, origin.y + (iy + 0.5) * cell_size};
    }
    /// Cell containing point p (no bounds check).
    void cell_of(Point2 p, int& ix, int& iy) const;
    size_t count_set() const;
};

// -- segment / polygon predicates -------------------------------------------

/// Distance from p to segment ab.
double dist_point_segment(Point2 p, Point2 a, Point2 b);
/// Minimum distance between segments ab and cd (0 when they intersect).
double dist_segment_segment(Point2 a, Point2 b, Point2 c, Point2 d);
/// True iff p lies on segment ab (within a scale-relative tolerance).
bool point_on_segment(Point2 p, Point2 a, Point2 b);
/// True iff segments ab and cd share at least one point.
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d);

/// Boundary-inclusive containment test (on-edge counts as inside).
bool point_in_polygon(Point2 p, const Polygon& poly);

/// True iff segment ab crosses the polygon boundary or has an endpoint inside.
bool segment_intersects_polygon(Point2 a, Point2 b, const Polygon& poly);

/// Distance from p to the polygon region (0 when p is inside or on the edge).
double dist_point_polygon(Point2 p, const Polygon& poly);

/// Minimum distance from segment ab to the polygon region (0 on contact).
double dist_segment_polygon(Point2 a, Point2 b, const Polygon& poly);

// -- raster operations -------------------------------------------------------

/// Grid over the boundary bbox; a cell is set iff its center lies in free
/// space (inside the boundary und outside all obstacles).
RasterGrid rasterize(const EnvironmentMap& map, double cell_size);

/// Morphological dilation with a disk structuring element; membership by
/// cell-center distance (||c - center|| <= radius). Same frame as the input.
RasterGrid dilate(const RasterGrid& grid, double radius);

struct Trajectory;

/// Closed waypoint loop around the single 4-connected set region, through
/// boundary-cell centers, counter-clockwise, starting at the smallest
/// (y, then x) boundary cell. First waypoint equals the last.
Trajectory trace_contour(const RasterGrid& grid);

}  // namespace coverplan
