#include "coverplan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "coverplan/trajectory.hpp"

namespace coverplan {

double norm(Point2 p) { return std::hypot(p.x, p.y); }
double dist(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }
double dist2(Point2 a, Point2 b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}
double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

double BBox::diagonal() const { return std::hypot(width(), height()); }
void BBox::expand(double m) {
    min.x -= m;
    min.y -= m;
    max.x += m;
    max.y += m;
}

// -- Polygon -----------------------------------------------------------------

double Polygon::signed_area() const {
    double s = 0.0;
    const size_t n = vertices.size();
    for (size_t i = 0; i < n; ++i) {
        const Point2& a = vertices[i];
        const Point2& b = vertices[(i + 1) % n];
        s += cross(a, b);
    }
    return 0.5 * s;
}

double Polygon::area() const { return std::abs(signed_area()); }

BBox Polygon::bbox() const {
    BBox b{{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()},
           {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()}};
    for (const Point2& p : vertices) {
        b.min.x = std::min(b.min.x, p.x);
        b.min.y = std::min(b.min.y, p.y);
        b.max.x = std::max(b.max.x, p.x);
        b.max.y = std::max(b.max.y, p.y);
    }
    return b;
}

namespace {

int orient_sign(Point2 a, Point2 b, Point2 c) {
    const double v = cross(b - a, c - a);
    // Relative tolerance keeps exactly-collinear axis-aligned cases stable.
    const double scale = std::max({std::abs(a.x), std::abs(a.y), std::abs(b.x), std::abs(b.y),
                                   std::abs(c.x), std::abs(c.y), 1.0});
    const double eps = 1e-12 * scale * scale;
    if (v > eps) return 1;
    if (v < -eps) return -1;
    return 0;
}

bool bbox_overlap_1d(double a0, double a1, double b0, double b1) {
    if (a0 > a1) std::swap(a0, a1);
    if (b0 > b1) std::swap(b0, b1);
    return std::max(a0, b0) <= std::min(a1, b1);
}

// Proper crossing: segment interiors intersect at a single point.
bool segments_cross_properly(Point2 a, Point2 b, Point2 c, Point2 d) {
    const int o1 = orient_sign(a, b, c);
    const int o2 = orient_sign(a, b, d);
    const int o3 = orient_sign(c, d, a);
    const int o4 = orient_sign(c, d, b);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

}  // namespace

void Polygon::validate() const {
    const size_t n = vertices.size();
    if (n < 3) throw ValidationError("polygon needs at least 3 vertices");
    for (const Point2& p : vertices)
        if (!is_finite(p)) throw ValidationError("polygon has non-finite vertex");
    const double a = signed_area();
    if (a == 0.0) throw ValidationError("polygon has zero signed area");
    // Reject properly crossing edge pairs; endpoint touches are tolerated so
    // traced raster boundaries with pinch vertices remain usable.
    for (size_t i = 0; i < n; ++i) {
        const Point2 a0 = vertices[i];
        const Point2 a1 = vertices[(i + 1) % n];
        for (size_t j = i + 1; j < n; ++j) {
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;  // adjacent
            const Point2 b0 = vertices[j];
            const Point2 b1 = vertices[(j + 1) % n];
            if (!bbox_overlap_1d(a0.x, a1.x, b0.x, b1.x)) continue;
            if (!bbox_overlap_1d(a0.y, a1.y, b0.y, b1.y)) continue;
            if (segments_cross_properly(a0, a1, b0, b1))
                throw ValidationError("polygon is self-intersecting");
        }
    }
}

void EnvironmentMap::validate() const {
    boundary.validate();
    if (!(detection_radius > 0.0)) throw ValidationError("detection_radius must be > 0");
    for (const Polygon& obs : obstacles) {
        obs.validate();
        for (const Point2& v : obs.vertices)
            if (!point_in_polygon(v, boundary))
                throw ValidationError("obstacle vertex outside boundary");
    }
}

bool EnvironmentMap::free_contains(Point2 p) const {
    if (!point_in_polygon(p, boundary)) return false;
    for (const Polygon& obs : obstacles)
        if (point_in_polygon(p, obs)) return false;
    return true;
}

void RasterGrid::cell_of(Point2 p, int& ix, int& iy) const {
    ix = static_cast<int>(std::floor((p.x - origin.x) / cell_size));
    iy = static_cast<int>(std::floor((p.y - origin.y) / cell_size));
}

size_t RasterGrid::count_set() const {
    size_t n = 0;
    for (uint8_t c : cells) n += (c != 0);
    return n;
}

// -- predicates --------------------------------------------------------------

double dist_point_segment(Point2 p, Point2 a, Point2 b) {
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return dist(p, a);
    double t = dot(p - a, ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return dist(p, a + t * ab);
}

bool point_on_segment(Point2 p, Point2 a, Point2 b) {
    if (orient_sign(a, b, p) != 0) return false;
    return p.x >= std::min(a.x, b.x) - 1e-12 && p.x <= std::max(a.x, b.x) + 1e-12 &&
           p.y >= std::min(a.y, b.y) - 1e-12 && p.y <= std::max(a.y, b.y) + 1e-12;
}

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
    if (segments_cross_properly(a, b, c, d)) return true;
    return point_on_segment(c, a, b) || point_on_segment(d, a, b) ||
           point_on_segment(a, c, d) || point_on_segment(b, c, d);
}

double dist_segment_segment(Point2 a, Point2 b, Point2 c, Point2 d) {
    if (segments_intersect(a, b, c, d)) return 0.0;
    return std::min({dist_point_segment(a, c, d), dist_point_segment(b, c, d),
                     dist_point_segment(c, a, b), dist_point_segment(d, a, b)});
}

bool point_in_polygon(Point2 p, const Polygon& poly) {
    poly.validate();
    const size_t n = poly.vertices.size();
    for (size_t i = 0; i < n; ++i)
        if (point_on_segment(p, poly.vertices[i], poly.vertices[(i + 1) % n])) return true;
    // Even-odd crossing count with a half-open vertex rule.
    bool inside = false;
    for (size_t i = 0; i < n; ++i) {
        const Point2& a = poly.vertices[i];
        const Point2& b = poly.vertices[(i + 1) % n];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xi = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < xi) inside = !inside;
        }
    }
    return inside;
}

bool segment_intersects_polygon(Point2 a, Point2 b, const Polygon& poly) {
    if (a.x == b.x && a.y == b.y) throw ValidationError("degenerate segment");
    poly.validate();
    if (point_in_polygon(a, poly) || point_in_polygon(b, poly)) return true;
    const size_t n = poly.vertices.size();
    for (size_t i = 0; i < n; ++i)
        if (segments_intersect(a, b, poly.vertices[i], poly.vertices[(i + 1) % n])) return true;
    return false;
}

double dist_point_polygon(Point2 p, const Polygon& poly) {
    if (point_in_polygon(p, poly)) return 0.0;
    double best = std::numeric_limits<double>::max();
    const size_t n = poly.vertices.size();
    for (size_t i = 0; i < n; ++i)
        best = std::min(best, dist_point_segment(p, poly.vertices[i], poly.vertices[(i + 1) % n]));
    return best;
}

double dist_segment_polygon(Point2 a, Point2 b, const Polygon& poly) {
    if (segment_intersects_polygon(a, b, poly)) return 0.0;
    double best = std::numeric_limits<double>::max();
    const size_t n = poly.vertices.size();
    for (size_t i = 0; i < n; ++i)
        best = std::min(best,
                        dist_segment_segment(a, b, poly.vertices[i], poly.vertices[(i + 1) % n]));
    return best;
}

// -- raster ops ---------------------------------------------------------------

RasterGrid rasterize(const EnvironmentMap& map, double cell_size) {
    if (!(cell_size > 0.0)) throw ValidationError("cell_size must be > 0");
    map.validate();
    const BBox bb = map.bbox();
    const int w = std::max(1, static_cast<int>(std::ceil(bb.width() / cell_size - 1e-9)));
    const int h = std::max(1, static_cast<int>(std::ceil(bb.height() / cell_size - 1e-9)));
    RasterGrid grid(bb.min, cell_size, w, h);
    for (int iy = 0; iy < h; ++iy)
        for (int ix = 0; ix < w; ++ix)
            if (map.free_contains(grid.center(ix, iy))) grid.set(ix, iy);
    return grid;
}

RasterGrid dilate(const RasterGrid& grid, double radius) {
    if (!(radius > 0.0)) throw ValidationError("dilation radius must be > 0");
    const int reach = static_cast<int>(std::floor(radius / grid.cell_size));
    std::vector<std::pair<int, int>> offsets;
    const double r2 = radius * radius;
    const double c2 = grid.cell_size * grid.cell_size;
    for (int dy = -reach; dy <= reach; ++dy)
        for (int dx = -reach; dx <= reach; ++dx)
            if ((dx * dx + dy * dy) * c2 <= r2) offsets.emplace_back(dx, dy);

    RasterGrid out(grid.origin, grid.cell_size, grid.width, grid.height);
    for (int iy = 0; iy < grid.height; ++iy) {
        for (int ix = 0; ix < grid.width; ++ix) {
            if (!grid.at(ix, iy)) continue;
            for (auto [dx, dy] : offsets) {
                const int jx = ix + dx, jy = iy + dy;
                if (out.in_bounds(jx, jy)) out.set(jx, jy);
            }
        }
    }
    return out;
}

namespace {

// 4-connected component labelling; returns number of components over set cells.
int count_components(const RasterGrid& grid, std::vector<int>& label) {
    label.assign(grid.cells.size(), -1);
    int ncomp = 0;
    std::deque<std::pair<int, int>> queue;
    for (int sy = 0; sy < grid.height; ++sy) {
        for (int sx = 0; sx < grid.width; ++sx) {
            const size_t sidx = static_cast<size_t>(sy) * grid.width + sx;
            if (!grid.cells[sidx] || label[sidx] >= 0) continue;
            label[sidx] = ncomp;
            queue.push_back({sx, sy});
            while (!queue.empty()) {
                auto [x, y] = queue.front();
                queue.pop_front();
                const int nx[4] = {x + 1, x - 1, x, x};
                const int ny[4] = {y, y, y + 1, y - 1};
                for (int k = 0; k < 4; ++k) {
                    if (!grid.in_bounds(nx[k], ny[k])) continue;
                    const size_t idx = static_cast<size_t>(ny[k]) * grid.width + nx[k];
                    if (grid.cells[idx] && label[idx] < 0) {
                        label[idx] = ncomp;
                        queue.push_back({nx[k], ny[k]});
                    }
                }
            }
            ++ncomp;
        }
    }
    return ncomp;
}

bool is_boundary_cell(const RasterGrid& g, int x, int y) {
    if (!g.at(x, y)) return false;
    const int nx[4] = {x + 1, x - 1, x, x};
    const int ny[4] = {y, y, y + 1, y - 1};
    for (int k = 0; k < 4; ++k)
        if (!g.in_bounds(nx[k], ny[k]) || !g.at(nx[k], ny[k])) return true;
    return false;
}

}  // namespace

Trajectory trace_contour(const RasterGrid& grid) {
    std::vector<int> label;
    const int ncomp = count_components(grid, label);
    if (ncomp == 0) throw ValidationError("trace_contour: empty grid");
    if (ncomp > 1) throw ValidationError("trace_contour: multiple disconnected components");

    // Start cell: smallest y, then smallest x.
    int sx = -1, sy = -1;
    for (int iy = 0; iy < grid.height && sx < 0; ++iy)
        for (int ix = 0; ix < grid.width; ++ix)
            if (grid.at(ix, iy)) {
                sx = ix;
                sy = iy;
                break;
            }

    // Moore-neighbour tracing. Neighbours in counter-clockwise order; the
    // cell west of the start is free by choice of the start cell. The scan
    // around each cell begins just past the free backtrack cell, and the new
    // backtrack is the last free cell seen before the move (always adjacent
    // to the new cell). Stops on re-entering the start with the first exit.
    static const int ddx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
    static const int ddy[8] = {0, 1, 1, 1, 0, -1, -1, -1};
    auto set_at = [&](int x, int y) { return grid.in_bounds(x, y) && grid.at(x, y) != 0; };

    std::vector<std::pair<int, int>> chain;
    chain.push_back({sx, sy});
    int cx = sx, cy = sy;
    int back = 4;
    int first_move = -1;
    const size_t step_cap = 4 * grid.cells.size() + 8;
    while (true) {
        int found = -1;
        int fprev = back;
        for (int k = 1; k <= 8; ++k) {
            const int d = (back + k) % 8;
            if (set_at(cx + ddx[d], cy + ddy[d])) {
                found = d;
                break;
            }
            fprev = d;
        }
        if (found < 0) break;  // isolated single cell
        if (cx == sx && cy == sy && first_move >= 0 && found == first_move) break;
        if (first_move < 0) first_move = found;
        const int bx = cx + ddx[fprev], by = cy + ddy[fprev];
        cx += ddx[found];
        cy += ddy[found];
        chain.push_back({cx, cy});
        back = (found + 4) % 8;
        for (int d = 0; d < 8; ++d) {
            if (cx + ddx[d] == bx && cy + ddy[d] == by) {
                back = d;
                break;
            }
        }
        if (chain.size() > step_cap)
            throw PlannerError("trace_contour: tracing did not terminate");
    }
    if (chain.size() > 1 && chain.back() == std::make_pair(sx, sy)) chain.pop_back();

    Trajectory traj;
    traj.closed = true;
    traj.points.reserve(chain.size() + 1);
    for (auto [x, y] : chain) traj.points.push_back(grid.center(x, y));

    // Normalize orientation to counter-clockwise.
    if (traj.points.size() >= 3) {
        Polygon loop{traj.points};
        if (loop.signed_area() < 0.0) {
            std::reverse(traj.points.begin(), traj.points.end());
            std::rotate(traj.points.begin(), traj.points.end() - 1, traj.points.end());
        }
    }
    traj.points.push_back(traj.points.front());

    for (size_t i = 0; i + 1 < traj.points.size(); ++i) {
        int ix, iy;
        grid.cell_of(traj.points[i], ix, iy);
        if (!is_boundary_cell(grid, ix, iy))
            throw PlannerError("trace_contour: waypoint off the region boundary");
    }
    return traj;
}

}  // namespace coverplan
