#pragma once

#include <vector>

#include "coverplan/geometry.hpp"
#include "coverplan/trajectory.hpp"

namespace coverplan {

enum class Tiling { Square, Hexagonal };

struct GraphEdge {
    int i = 0;
    int j = 0;
    double weight = 0.0;
};

/// Coverage lattice: tiling centers spaced 2r with obstacle clearance, edges
/// between adjacent centers whose connecting segment keeps clearance r.
struct GridGraph {
    std::vector<Point2> vertices;
    std::vector<GraphEdge> edges;
    Tiling tiling = Tiling::Square;
};

struct SpanningTree {
    std::vector<GraphEdge> edges;    // V-1 edges of the spanned component
    std::vector<int> vertex_ids;     // vertices of that component
    std::vector<int> parent;         // per graph vertex; -1 for root/absent
    double total_weight = 0.0;
    int dropped_vertices = 0;        // vertices outside the largest component
};

struct MstConfig {
    /// Vertical-penalty factor in (0, 1); smaller values make north-south
    /// edges more expensive, steering the tree toward east-west runs.
    double epsilon = 0.01;
    Tiling tiling = Tiling::Square;
    /// Raster resolution for dilation/contour; <= 0 selects r / 10.
    double raster_cell = 0.0;
};

/// Edge weight: Euclidean length with the vertical component inflated by
/// 1/sqrt(epsilon).
double anisotropic_weight(Point2 delta, double epsilon);

GridGraph build_grid(const EnvironmentMap& map, const MstConfig& cfg);

/// Kruskal on the largest connected component; ties broken by
/// (weight, lower vertex index, higher vertex index).
SpanningTree kruskal_mst(const GridGraph& graph);

/// Full pipeline: grid, spanning tree, dilation of the rasterized tree, and
/// the traced contour as a closed trajectory.
Trajectory plan_mst(const EnvironmentMap& map, const MstConfig& cfg);

}  // namespace coverplan
