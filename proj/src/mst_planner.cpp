#include "coverplan/mst_planner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iostream>
#include <limits>
#include <numeric>

namespace coverplan {

double anisotropic_weight(Point2 delta, double epsilon) {
    return std::sqrt(delta.x * delta.x + delta.y * delta.y / epsilon);
}

namespace {

void check_config(const MstConfig& cfg) {
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
        throw ValidationError("epsilon must be in (0, 1)");
}

bool vertex_clear(const EnvironmentMap& map, Point2 p) {
    if (!point_in_polygon(p, map.boundary)) return false;
    for (const Polygon& obs : map.obstacles)
        if (dist_point_polygon(p, obs) < map.detection_radius) return false;
    return true;
}

// The contour later runs within ~r of each edge, so the whole segment needs
// clearance r, not just obstacle-freeness.
bool edge_clear(const EnvironmentMap& map, Point2 a, Point2 b) {
    for (const Polygon& obs : map.obstacles)
        if (dist_segment_polygon(a, b, obs) < map.detection_radius) return false;
    return true;
}

struct DisjointSet {
    std::vector<int> parent, size;
    explicit DisjointSet(int n) : parent(n), size(n, 1) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
        return true;
    }
};

// Closest tube gap between non-adjacent tree features: 2r for the square
// lattice, sqrt(3) r between hexagonal rows.
double min_parallel_gap(Tiling tiling, double r) {
    return tiling == Tiling::Square ? 2.0 * r : std::sqrt(3.0) * r;
}

}  // namespace

GridGraph build_grid(const EnvironmentMap& map, const MstConfig& cfg) {
    map.validate();
    check_config(cfg);
    const double r = map.detection_radius;
    const double spacing = 2.0 * r;
    const BBox bb = map.bbox();

    GridGraph graph;
    graph.tiling = cfg.tiling;

    // Lattice rows/columns centered in the bbox so leftover space splits
    // evenly between the two margins.
    std::vector<std::vector<int>> index_rows;  // vertex id per (row, col), -1 if culled
    std::vector<double> row_y;
    auto add_vertex = [&](Point2 p) -> int {
        if (!vertex_clear(map, p)) return -1;
        graph.vertices.push_back(p);
        return static_cast<int>(graph.vertices.size()) - 1;
    };

    if (cfg.tiling == Tiling::Square) {
        const int nx = bb.width() >= spacing
                           ? static_cast<int>(std::floor((bb.width() - spacing) / spacing + 1e-9)) + 1
                           : 0;
        const int ny = bb.height() >= spacing
                           ? static_cast<int>(std::floor((bb.height() - spacing) / spacing + 1e-9)) + 1
                           : 0;
        if (nx <= 0 || ny <= 0) throw PlannerError("domain too small for spacing 2r");
        const double x0 = bb.min.x + (bb.width() - (nx - 1) * spacing) / 2.0;
        const double y0 = bb.min.y + (bb.height() - (ny - 1) * spacing) / 2.0;
        for (int row = 0; row < ny; ++row) {
            index_rows.emplace_back(nx, -1);
            row_y.push_back(y0 + row * spacing);
            for (int c = 0; c < nx; ++c)
                index_rows[row][c] = add_vertex({x0 + c * spacing, row_y[row]});
        }
        for (int row = 0; row < ny; ++row) {
            for (int c = 0; c < nx; ++c) {
                const int a = index_rows[row][c];
                if (a < 0) continue;
                const int right = c + 1 < nx ? index_rows[row][c + 1] : -1;
                const int up = row + 1 < ny ? index_rows[row + 1][c] : -1;
                for (int b : {right, up}) {
                    if (b < 0) continue;
                    if (!edge_clear(map, graph.vertices[a], graph.vertices[b])) continue;
                    graph.edges.push_back(
                        {a, b, anisotropic_weight(graph.vertices[b] - graph.vertices[a],
                                                  cfg.epsilon)});
                }
            }
        }
    } else {
        const double pitch = std::sqrt(3.0) * r;
        const int ny = bb.height() >= spacing
                           ? static_cast<int>(std::floor((bb.height() - spacing) / pitch + 1e-9)) + 1
                           : 0;
        if (ny <= 0) throw PlannerError("domain too small for spacing 2r");
        const double y0 = bb.min.y + (bb.height() - (ny - 1) * pitch) / 2.0;
        const int nx_even =
            bb.width() >= spacing
                ? static_cast<int>(std::floor((bb.width() - spacing) / spacing + 1e-9)) + 1
                : 0;
        if (nx_even <= 0) throw PlannerError("domain too small for spacing 2r");
        const double x0 = bb.min.x + (bb.width() - (nx_even - 1) * spacing) / 2.0;
        for (int row = 0; row < ny; ++row) {
            const double off = (row % 2 == 1) ? r : 0.0;
            index_rows.emplace_back(nx_even, -1);
            row_y.push_back(y0 + row * pitch);
            for (int c = 0; c < nx_even; ++c) {
                const double x = x0 + off + c * spacing;
                if (x > bb.max.x - r + 1e-9) continue;  // odd-row shift may push out
                index_rows[row][c] = add_vertex({x, row_y[row]});
            }
        }
        for (int row = 0; row < ny; ++row) {
            const bool odd = row % 2 == 1;
            for (int c = 0; c < nx_even; ++c) {
                const int a = index_rows[row][c];
                if (a < 0) continue;
                const int right = c + 1 < nx_even ? index_rows[row][c + 1] : -1;
                int up_left = -1, up_right = -1;
                if (row + 1 < ny) {
                    // Odd rows sit +r relative to even rows.
                    up_left = odd ? index_rows[row + 1][c] : (c > 0 ? index_rows[row + 1][c - 1] : -1);
                    up_right = odd ? (c + 1 < nx_even ? index_rows[row + 1][c + 1] : -1)
                                   : index_rows[row + 1][c];
                }
                for (int b : {right, up_left, up_right}) {
                    if (b < 0) continue;
                    if (!edge_clear(map, graph.vertices[a], graph.vertices[b])) continue;
                    graph.edges.push_back(
                        {a, b, anisotropic_weight(graph.vertices[b] - graph.vertices[a],
                                                  cfg.epsilon)});
                }
            }
        }
    }

    if (graph.vertices.empty()) throw PlannerError("domain too small for spacing 2r");
    return graph;
}

SpanningTree kruskal_mst(const GridGraph& graph) {
    const int nv = static_cast<int>(graph.vertices.size());
    if (nv == 0) throw ValidationError("kruskal_mst: empty graph");

    std::vector<int> order(graph.edges.size());
    std::iota(order.begin(), order.end(), 0);
    auto key = [&](int e) {
        const GraphEdge& ed = graph.edges[e];
        return std::tuple<double, int, int>(ed.weight, std::min(ed.i, ed.j),
                                            std::max(ed.i, ed.j));
    };
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key(a) < key(b); });

    DisjointSet dsu(nv);
    std::vector<GraphEdge> forest;
    for (int e : order) {
        const GraphEdge& ed = graph.edges[e];
        if (dsu.unite(ed.i, ed.j)) forest.push_back(ed);
    }

    // Largest component wins; ties go to the one containing the smallest id.
    std::vector<int> comp_count(nv, 0);
    for (int v = 0; v < nv; ++v) ++comp_count[dsu.find(v)];
    int best_root = dsu.find(0);
    for (int v = 0; v < nv; ++v) {
        const int root = dsu.find(v);
        if (comp_count[root] > comp_count[best_root]) best_root = root;
    }

    SpanningTree tree;
    tree.dropped_vertices = nv - comp_count[best_root];
    for (int v = 0; v < nv; ++v)
        if (dsu.find(v) == best_root) tree.vertex_ids.push_back(v);
    for (const GraphEdge& ed : forest) {
        if (dsu.find(ed.i) != best_root) continue;
        tree.edges.push_back(ed);
        tree.total_weight += ed.weight;
    }

    // Parents by breadth-first walk from the smallest vertex in the component.
    tree.parent.assign(nv, -1);
    std::vector<std::vector<std::pair<int, int>>> adj(nv);
    for (const GraphEdge& ed : tree.edges) {
        adj[ed.i].push_back({ed.j, 1});
        adj[ed.j].push_back({ed.i, 1});
    }
    std::vector<char> seen(nv, 0);
    std::deque<int> queue{tree.vertex_ids.front()};
    seen[tree.vertex_ids.front()] = 1;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (auto [w, unused] : adj[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                tree.parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    return tree;
}

Trajectory plan_mst(const EnvironmentMap& map, const MstConfig& cfg) {
    const GridGraph graph = build_grid(map, cfg);
    const SpanningTree tree = kruskal_mst(graph);
    if (tree.dropped_vertices > 0)
        std::cerr << "plan_mst: grid disconnected, planning on largest component ("
                  << tree.dropped_vertices << " vertices dropped)\n";

    const double r = map.detection_radius;
    const double cell = cfg.raster_cell > 0.0 ? cfg.raster_cell : r / 10.0;
    // Dilation radius one cell under half the closest tube gap, so the
    // corridor between adjacent parallel runs stays open for the contour.
    const double rho = min_parallel_gap(cfg.tiling, r) / 2.0 - cell;
    if (rho < 2.0 * cell) throw ValidationError("raster_cell too coarse for detection radius");

    BBox tb{{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()},
            {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()}};
    for (int v : tree.vertex_ids) {
        tb.min.x = std::min(tb.min.x, graph.vertices[v].x);
        tb.min.y = std::min(tb.min.y, graph.vertices[v].y);
        tb.max.x = std::max(tb.max.x, graph.vertices[v].x);
        tb.max.y = std::max(tb.max.y, graph.vertices[v].y);
    }
    tb.expand(rho + 2.0 * cell);
    const int w = std::max(1, static_cast<int>(std::ceil(tb.width() / cell)));
    const int h = std::max(1, static_cast<int>(std::ceil(tb.height() / cell)));
    RasterGrid raster(tb.min, cell, w, h);

    auto stamp = [&](Point2 p) {
        int ix, iy;
        raster.cell_of(p, ix, iy);
        if (raster.in_bounds(ix, iy)) raster.set(ix, iy);
    };
    for (int v : tree.vertex_ids) stamp(graph.vertices[v]);
    for (const GraphEdge& ed : tree.edges) {
        const Point2 a = graph.vertices[ed.i];
        const Point2 b = graph.vertices[ed.j];
        const double len = dist(a, b);
        const int steps = std::max(1, static_cast<int>(std::ceil(len / (cell / 3.0))));
        for (int s = 0; s <= steps; ++s) stamp(a + (static_cast<double>(s) / steps) * (b - a));
    }

    return trace_contour(dilate(raster, rho));
}

}  // namespace coverplan
