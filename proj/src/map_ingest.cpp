#include "coverplan/map_ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

#include "coverplan/map_io.hpp"

namespace coverplan {

namespace {

// Skips whitespace and '#' comments, then reads one unsigned decimal token.
bool next_pnm_int(const std::string& s, size_t& pos, long& value) {
    while (pos < s.size()) {
        if (std::isspace(static_cast<unsigned char>(s[pos]))) {
            ++pos;
        } else if (s[pos] == '#') {
            while (pos < s.size() && s[pos] != '\n') ++pos;
        } else {
            break;
        }
    }
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) return false;
    long v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        v = v * 10 + (s[pos] - '0');
        if (v > 1'000'000'000L) return false;
        ++pos;
    }
    value = v;
    return true;
}

}  // namespace

GrayImage image_from_bytes(const std::string& bytes) {
    if (bytes.size() < 2) throw ValidationError("PGM: file too short");
    const std::string magic = bytes.substr(0, 2);
    if (magic != "P5" && magic != "P2") {
        if (magic == "P6" || magic == "P3")
            throw ValidationError("PGM: color PNM input is unsupported, convert to P5/P2");
        throw ValidationError("PGM: unsupported format magic '" + magic + "'");
    }
    size_t pos = 2;
    long w = 0, h = 0, maxval = 0;
    if (!next_pnm_int(bytes, pos, w) || !next_pnm_int(bytes, pos, h) ||
        !next_pnm_int(bytes, pos, maxval))
        throw ValidationError("PGM: malformed header");
    if (w <= 0 || h <= 0) throw ValidationError("PGM: malformed header (bad dimensions)");
    if (maxval <= 0 || maxval > 255)
        throw ValidationError("PGM: unsupported maxval (only 8-bit images)");

    GrayImage img;
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    const size_t count = static_cast<size_t>(w) * static_cast<size_t>(h);
    img.pixels.reserve(count);

    if (magic == "P5") {
        if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos])))
            throw ValidationError("PGM: malformed header (missing separator)");
        ++pos;
        if (bytes.size() - pos < count) throw ValidationError("PGM: truncated payload");
        for (size_t i = 0; i < count; ++i)
            img.pixels.push_back(static_cast<uint8_t>(bytes[pos + i]));
    } else {
        for (size_t i = 0; i < count; ++i) {
            long v = 0;
            if (!next_pnm_int(bytes, pos, v)) throw ValidationError("PGM: truncated payload");
            if (v > maxval) throw ValidationError("PGM: sample exceeds maxval");
            img.pixels.push_back(static_cast<uint8_t>(v));
        }
    }
    return img;
}

GrayImage load_image(const std::string& path) { return image_from_bytes(read_file(path)); }

RasterGrid threshold_segment(const GrayImage& img, int threshold, double meters_per_pixel) {
    if (!(meters_per_pixel > 0.0)) throw ValidationError("meters_per_pixel must be > 0");
    RasterGrid grid({0.0, 0.0}, meters_per_pixel, img.width, img.height);
    for (int row = 0; row < img.height; ++row) {
        const int iy = img.height - 1 - row;  // image row 0 is north
        for (int ix = 0; ix < img.width; ++ix)
            if (img.at(ix, row) <= threshold) grid.set(ix, iy);
    }
    return grid;
}

namespace {

// Mask of the largest 4-connected set component; throws when nothing is set.
RasterGrid largest_component(const RasterGrid& grid) {
    std::vector<int> label(grid.cells.size(), -1);
    std::vector<size_t> comp_size;
    std::deque<std::pair<int, int>> queue;
    for (int sy = 0; sy < grid.height; ++sy) {
        for (int sx = 0; sx < grid.width; ++sx) {
            const size_t sidx = static_cast<size_t>(sy) * grid.width + sx;
            if (!grid.cells[sidx] || label[sidx] >= 0) continue;
            const int id = static_cast<int>(comp_size.size());
            comp_size.push_back(0);
            label[sidx] = id;
            queue.push_back({sx, sy});
            while (!queue.empty()) {
                auto [x, y] = queue.front();
                queue.pop_front();
                ++comp_size[id];
                const int nx[4] = {x + 1, x - 1, x, x};
                const int ny[4] = {y, y, y + 1, y - 1};
                for (int k = 0; k < 4; ++k) {
                    if (!grid.in_bounds(nx[k], ny[k])) continue;
                    const size_t idx = static_cast<size_t>(ny[k]) * grid.width + nx[k];
                    if (grid.cells[idx] && label[idx] < 0) {
                        label[idx] = id;
                        queue.push_back({nx[k], ny[k]});
                    }
                }
            }
        }
    }
    if (comp_size.empty()) throw ValidationError("extract_boundary: empty segmentation");
    const int keep = static_cast<int>(
        std::max_element(comp_size.begin(), comp_size.end()) - comp_size.begin());
    RasterGrid mask(grid.origin, grid.cell_size, grid.width, grid.height);
    for (size_t i = 0; i < grid.cells.size(); ++i)
        if (label[i] == keep) mask.cells[i] = 1;
    return mask;
}

// Douglas-Peucker on an open chain; keeps endpoints, splits while the
// farthest deviation exceeds tol.
void simplify_chain(const std::vector<Point2>& pts, size_t lo, size_t hi, double tol,
                    std::vector<char>& keep) {
    if (hi <= lo + 1) return;
    double dmax = -1.0;
    size_t imax = lo;
    for (size_t i = lo + 1; i < hi; ++i) {
        const double d = dist_point_segment(pts[i], pts[lo], pts[hi]);
        if (d > dmax) {
            dmax = d;
            imax = i;
        }
    }
    if (dmax > tol) {
        keep[imax] = 1;
        simplify_chain(pts, lo, imax, tol, keep);
        simplify_chain(pts, imax, hi, tol, keep);
    }
}

}  // namespace

Polygon extract_boundary(const RasterGrid& grid, double simplify_tol) {
    const RasterGrid mask = largest_component(grid);

    // Start at the bottom-left corner of the smallest (y, then x) set cell and
    // walk the cell edges counter-clockwise, set region on the left. At pinch
    // corners the right turn is preferred, which keeps the loop from crossing
    // itself.
    int sx = -1, sy = -1;
    for (int iy = 0; iy < mask.height && sx < 0; ++iy)
        for (int ix = 0; ix < mask.width; ++ix)
            if (mask.at(ix, iy)) {
                sx = ix;
                sy = iy;
                break;
            }

    auto cell_set = [&](int x, int y) { return mask.in_bounds(x, y) && mask.at(x, y) != 0; };
    // Directions R, U, L, D. left_of[d] / right_of[d]: cell offsets relative
    // to the corner for an edge leaving in direction d.
    static const int dx[4] = {1, 0, -1, 0};
    static const int dy[4] = {0, 1, 0, -1};
    static const int lox[4] = {0, -1, -1, 0};
    static const int loy[4] = {0, 0, -1, -1};
    static const int rox[4] = {0, 0, -1, -1};
    static const int roy[4] = {-1, 0, 0, -1};
    auto edge_ok = [&](int cx, int cy, int d) {
        return cell_set(cx + lox[d], cy + loy[d]) && !cell_set(cx + rox[d], cy + roy[d]);
    };

    std::vector<std::pair<int, int>> corners;
    int cx = sx, cy = sy, dir = 0;  // bottom edge of the start cell, heading +x
    if (!edge_ok(cx, cy, dir)) throw PlannerError("extract_boundary: bad start edge");
    const size_t cap = 8 * mask.cells.size() + 16;
    do {
        corners.push_back({cx, cy});
        cx += dx[dir];
        cy += dy[dir];
        int next = -1;
        for (int turn = 0; turn < 4; ++turn) {
            const int d = (dir + 3 + turn) % 4;  // right turn, straight, left, back
            if (edge_ok(cx, cy, d)) {
                next = d;
                break;
            }
        }
        if (next < 0) throw PlannerError("extract_boundary: dead end while tracing");
        dir = next;
        if (corners.size() > cap) throw PlannerError("extract_boundary: tracing did not terminate");
    } while (!(cx == sx && cy == sy && dir == 0));

    std::vector<Point2> pts;
    pts.reserve(corners.size());
    for (auto [ix, iy] : corners)
        pts.push_back({mask.origin.x + ix * mask.cell_size, mask.origin.y + iy * mask.cell_size});

    if (simplify_tol > 0.0 && pts.size() > 3) {
        // Closed chain: anchor at index 0 and the farthest vertex, simplify
        // the two halves independently.
        size_t far = 1;
        double best = -1.0;
        for (size_t i = 1; i < pts.size(); ++i) {
            const double d = dist2(pts[i], pts[0]);
            if (d > best) {
                best = d;
                far = i;
            }
        }
        std::vector<char> keep(pts.size(), 0);
        keep[0] = keep[far] = 1;
        simplify_chain(pts, 0, far, simplify_tol, keep);
        {
            // Second half wraps around; unroll it into a temporary chain.
            std::vector<Point2> tail(pts.begin() + far, pts.end());
            tail.push_back(pts[0]);
            std::vector<char> keep_tail(tail.size(), 0);
            keep_tail.front() = keep_tail.back() = 1;
            simplify_chain(tail, 0, tail.size() - 1, simplify_tol, keep_tail);
            for (size_t i = 1; i + 1 < tail.size(); ++i)
                if (keep_tail[i]) keep[far + i] = 1;
        }
        std::vector<Point2> out;
        for (size_t i = 0; i < pts.size(); ++i)
            if (keep[i]) out.push_back(pts[i]);
        pts = std::move(out);
    }

    Polygon poly{std::move(pts)};
    if (poly.signed_area() < 0.0) std::reverse(poly.vertices.begin(), poly.vertices.end());
    poly.validate();
    return poly;
}

}  // namespace coverplan
