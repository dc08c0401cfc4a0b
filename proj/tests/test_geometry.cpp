#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "coverplan/geometry.hpp"
#include "coverplan/trajectory.hpp"

using namespace coverplan;

namespace {

Polygon unit_square() { return Polygon{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}; }

Polygon square(double x0, double y0, double side) {
    return Polygon{{{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}}};
}

// Independent winding-number containment (oracle for point_in_polygon).
// Returns 0 for points on the boundary, where both conventions must agree on
// "inside"; callers steer clear of exact-boundary samples.
int winding_number(Point2 p, const Polygon& poly) {
    int wn = 0;
    const size_t n = poly.vertices.size();
    for (size_t i = 0; i < n; ++i) {
        const Point2 a = poly.vertices[i];
        const Point2 b = poly.vertices[(i + 1) % n];
        if (a.y <= p.y) {
            if (b.y > p.y && cross(b - a, p - a) > 0) ++wn;
        } else {
            if (b.y <= p.y && cross(b - a, p - a) < 0) --wn;
        }
    }
    return wn;
}

double loop_length(const Trajectory& t) {
    double len = 0.0;
    for (size_t i = 0; i + 1 < t.points.size(); ++i) len += dist(t.points[i], t.points[i + 1]);
    if (t.closed && t.points.size() > 1) len += dist(t.points.back(), t.points.front());
    return len;
}

}  // namespace

TEST_CASE("point_in_polygon basics") {
    const Polygon sq = unit_square();
    CHECK(point_in_polygon({0.5, 0.5}, sq));
    CHECK_FALSE(point_in_polygon({2, 2}, sq));
    // Boundary convention: on-edge counts as inside.
    CHECK(point_in_polygon({0.0, 0.5}, sq));
    CHECK(point_in_polygon({1.0, 1.0}, sq));
    CHECK_THROWS_AS(point_in_polygon({0, 0}, Polygon{{{0, 0}, {1, 1}}}), ValidationError);
}

TEST_CASE("point_in_polygon agrees with winding-number oracle on a random 12-gon") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ang_jit(-0.2, 0.2);
    std::uniform_real_distribution<double> rad(0.5, 1.5);
    Polygon poly;
    for (int k = 0; k < 12; ++k) {
        const double a = 2.0 * M_PI * k / 12 + ang_jit(rng);
        poly.vertices.push_back({rad(rng) * std::cos(a), rad(rng) * std::sin(a)});
    }
    poly.validate();
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (int t = 0; t < 1000; ++t) {
        const Point2 p{coord(rng), coord(rng)};
        CHECK(point_in_polygon(p, poly) == (winding_number(p, poly) != 0));
    }
}

TEST_CASE("segment_intersects_polygon basics") {
    const Polygon sq = unit_square();
    CHECK_FALSE(segment_intersects_polygon({-1, -1}, {2, -1}, sq));
    CHECK(segment_intersects_polygon({-1, 0.5}, {2, 0.5}, sq));
    CHECK_THROWS_AS(segment_intersects_polygon({0.5, 0.5}, {0.5, 0.5}, sq), ValidationError);
}

TEST_CASE("segment_intersects_polygon agrees with dense-sampling oracle") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(-2.0, 3.0);
    const Polygon sq = unit_square();
    int positive = 0;
    for (int t = 0; t < 300; ++t) {
        const Point2 a{coord(rng), coord(rng)};
        const Point2 b{coord(rng), coord(rng)};
        if (a.x == b.x && a.y == b.y) continue;
        bool sampled = false;
        for (int s = 0; s <= 10000; ++s) {
            const double u = s / 10000.0;
            if (point_in_polygon(a + u * (b - a), sq)) {
                sampled = true;
                break;
            }
        }
        positive += sampled;
        CHECK(segment_intersects_polygon(a, b, sq) == sampled);
    }
    CHECK(positive > 20);  // the sweep must exercise both outcomes
}

TEST_CASE("rasterize counts free cells") {
    EnvironmentMap map;
    map.boundary = square(0, 0, 10);
    map.detection_radius = 5.0;

    SUBCASE("no obstacles") {
        const RasterGrid g = rasterize(map, 1.0);
        CHECK(g.width == 10);
        CHECK(g.height == 10);
        CHECK(g.count_set() == 100);
    }
    SUBCASE("centered obstacle covering 25 percent") {
        map.obstacles.push_back(square(2.5, 2.5, 5));
        const RasterGrid g = rasterize(map, 0.1);
        const double free_frac = static_cast<double>(g.count_set()) / (100.0 * 100.0);
        CHECK(free_frac == doctest::Approx(0.75).epsilon(0.02));
    }
    SUBCASE("invalid inputs") {
        CHECK_THROWS_AS(rasterize(map, 0.0), ValidationError);
        EnvironmentMap bad;
        bad.boundary.vertices = {{0, 0}, {1, 0}};
        bad.detection_radius = 1.0;
        CHECK_THROWS_AS(rasterize(bad, 0.5), ValidationError);
    }
    SUBCASE("deterministic") {
        const RasterGrid a = rasterize(map, 0.25);
        const RasterGrid b = rasterize(map, 0.25);
        CHECK(a.cells == b.cells);
    }
}

TEST_CASE("dilate matches brute-force disk membership") {
    RasterGrid g({0, 0}, 1.0, 21, 21);
    g.set(10, 10);
    const RasterGrid out = dilate(g, 3.0);
    // Oracle: recount integer offsets inside the disk.
    size_t expect = 0;
    for (int dy = -4; dy <= 4; ++dy)
        for (int dx = -4; dx <= 4; ++dx)
            if (dx * dx + dy * dy <= 9) ++expect;
    CHECK(out.count_set() == expect);
    CHECK(expect == 29);
}

TEST_CASE("dilate with sub-cell radius is the identity") {
    RasterGrid g({0, 0}, 1.0, 9, 9);
    g.set(4, 4);
    g.set(5, 4);
    const RasterGrid out = dilate(g, 0.5);
    CHECK(out.cells == g.cells);
}

TEST_CASE("dilate of a line approximates the analytic stadium area") {
    const double cell = 0.05;
    const double r = 1.0;
    const double L = 4.0;
    const int w = static_cast<int>((L + 4 * r) / cell);
    const int h = static_cast<int>((4 * r) / cell);
    RasterGrid g({0, 0}, cell, w, h);
    const int iy = h / 2;
    int line_cells = 0;
    for (int ix = 0; ix < w; ++ix) {
        const double x = g.center(ix, iy).x;
        if (x >= 2 * r && x <= 2 * r + L) {
            g.set(ix, iy);
            ++line_cells;
        }
    }
    REQUIRE(line_cells > 0);
    const RasterGrid out = dilate(g, r);
    const double area = static_cast<double>(out.count_set()) * cell * cell;
    const double expect = 2.0 * r * L + M_PI * r * r;
    CHECK(area == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("dilate is extensive, monotone and composes across radii") {
    std::mt19937_64 rng(3);
    RasterGrid g({0, 0}, 1.0, 40, 40);
    std::uniform_int_distribution<int> pick(8, 31);
    for (int k = 0; k < 25; ++k) g.set(pick(rng), pick(rng));

    const RasterGrid d1 = dilate(g, 2.0);
    for (size_t i = 0; i < g.cells.size(); ++i)
        if (g.cells[i]) CHECK(d1.cells[i]);  // extensive

    RasterGrid g2 = g;
    g2.set(20, 20);
    const RasterGrid d2 = dilate(g2, 2.0);
    for (size_t i = 0; i < d1.cells.size(); ++i)
        if (d1.cells[i]) CHECK(d2.cells[i]);  // monotone in the input

    // dilate(g, r1 + r2) vs dilate(dilate(g, r1), r2): equal within one cell.
    const RasterGrid whole = dilate(g, 3.0);
    const RasterGrid staged = dilate(dilate(g, 1.5), 1.5);
    for (int iy = 0; iy < g.height; ++iy) {
        for (int ix = 0; ix < g.width; ++ix) {
            if (whole.at(ix, iy) == staged.at(ix, iy)) continue;
            bool near = false;
            for (int dy = -1; dy <= 1 && !near; ++dy)
                for (int dx = -1; dx <= 1 && !near; ++dx)
                    if (whole.in_bounds(ix + dx, iy + dy) &&
                        whole.at(ix + dx, iy + dy) != whole.at(ix, iy))
                        near = true;
            CHECK(near);  // disagreements only on the one-cell rim
        }
    }
}

TEST_CASE("trace_contour of a filled block") {
    RasterGrid g({0, 0}, 1.0, 9, 9);
    for (int iy = 2; iy < 7; ++iy)
        for (int ix = 2; ix < 7; ++ix) g.set(ix, iy);
    const Trajectory t = trace_contour(g);
    CHECK(t.closed);
    CHECK(t.points.front().x == t.points.back().x);
    CHECK(t.points.front().y == t.points.back().y);
    const double len = loop_length(t);
    CHECK(len >= 16.0);  // 4 * (5 - 1) through cell centers
    CHECK(len <= 24.0);  // 4 * 5 + one cell per side
    // Counter-clockwise, starting at the smallest (y, x) boundary cell.
    Polygon loop{std::vector<Point2>(t.points.begin(), t.points.end() - 1)};
    CHECK(loop.signed_area() > 0.0);
    CHECK(t.points.front().x == doctest::Approx(2.5));
    CHECK(t.points.front().y == doctest::Approx(2.5));
}

TEST_CASE("trace_contour of a single cell") {
    RasterGrid g({0, 0}, 1.0, 5, 5);
    g.set(2, 3);
    const Trajectory t = trace_contour(g);
    REQUIRE(t.points.size() == 2);
    CHECK(t.points[0].x == doctest::Approx(2.5));
    CHECK(t.points[0].y == doctest::Approx(3.5));
    CHECK(t.points[1].x == doctest::Approx(t.points[0].x));
}

TEST_CASE("trace_contour rejects empty and split regions") {
    RasterGrid g({0, 0}, 1.0, 6, 6);
    CHECK_THROWS_AS(trace_contour(g), ValidationError);
    g.set(0, 0);
    g.set(5, 5);
    CHECK_THROWS_AS(trace_contour(g), ValidationError);
}

TEST_CASE("trace_contour around a dilated L-shaped tree") {
    const double cell = 0.05;
    const double r = 1.0;
    const double leg_a = 6.0, leg_b = 4.0;
    const int w = static_cast<int>((leg_a + 4 * r) / cell);
    const int h = static_cast<int>((leg_b + 4 * r) / cell);
    RasterGrid g({0, 0}, cell, w, h);
    auto stamp = [&](Point2 p) {
        int ix, iy;
        g.cell_of(p, ix, iy);
        if (g.in_bounds(ix, iy)) g.set(ix, iy);
    };
    const Point2 corner{2 * r, 2 * r};
    for (double s = 0; s <= leg_a; s += cell / 3) stamp({corner.x + s, corner.y});
    for (double s = 0; s <= leg_b; s += cell / 3) stamp({corner.x, corner.y + s});

    const Trajectory t = trace_contour(dilate(g, r));
    const double expect = 2.0 * (leg_a + leg_b) + 2.0 * M_PI * r;
    CHECK(loop_length(t) == doctest::Approx(expect).epsilon(0.10));

    // Every waypoint sits on a boundary cell of the dilated region.
    const RasterGrid d = dilate(g, r);
    for (size_t i = 0; i + 1 < t.points.size(); ++i) {
        int ix, iy;
        d.cell_of(t.points[i], ix, iy);
        REQUIRE(d.at(ix, iy));
        bool has_free_side = false;
        const int nx[4] = {ix + 1, ix - 1, ix, ix};
        const int ny[4] = {iy, iy, iy + 1, iy - 1};
        for (int k = 0; k < 4; ++k)
            if (!d.in_bounds(nx[k], ny[k]) || !d.at(nx[k], ny[k])) has_free_side = true;
        CHECK(has_free_side);
    }
}

TEST_CASE("polygon validation") {
    CHECK_THROWS_AS(Polygon{{{0, 0}, {1, 0}}}.validate(), ValidationError);
    CHECK_THROWS_AS(Polygon{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}}.validate(), ValidationError);
    CHECK_NOTHROW(unit_square().validate());
    EnvironmentMap map;
    map.boundary = unit_square();
    map.detection_radius = 0.1;
    map.obstacles.push_back(square(2, 2, 1));
    CHECK_THROWS_AS(map.validate(), ValidationError);
}
