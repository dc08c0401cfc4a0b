#pragma once

#include <cstdint>
#include <vector>

#include "coverplan/geometry.hpp"
#include "coverplan/trajectory.hpp"

namespace coverplan {

/// Dense symmetric cost matrix over mesh nodes; pairs whose connecting
/// segment hits an obstacle carry the penalty cost instead of the distance.
struct TspInstance {
    std::vector<Point2> nodes;
    std::vector<double> cost;  // row-major n x n
    double penalty = 0.0;

    double at(int i, int j) const { return cost[static_cast<size_t>(i) * nodes.size() + j]; }
    int size() const { return static_cast<int>(nodes.size()); }
};

struct Tour {
    std::vector<int> order;   // permutation of node indices
    double length = 0.0;      // Euclidean cycle length (penalties not inflated)
    double cost = 0.0;        // cycle cost under the instance matrix
    bool uses_penalized_edge = false;
};

struct TspConfig {
    int restarts = 8;
    /// Cost for obstacle-crossing edges; <= 0 selects 1e6 x domain diagonal.
    double penalty = 0.0;
    uint64_t rng_seed = 0;
    /// 2-opt candidate-list width; the final full sweeps make the result
    /// exactly 2-opt stable regardless.
    int neighbor_limit = 24;
    int max_threads = 0;  // <= 0: hardware/env limit
};

/// Nodes on a square mesh with spacing r (half the 2r planner grid), inside
/// the boundary and outside obstacles.
TspInstance build_instance(const EnvironmentMap& map, const TspConfig& cfg);

/// Greedy tour from `start`; ties go to the lowest node index.
Tour nearest_neighbor_tour(const TspInstance& inst, int start);

/// First-improvement 2-opt to a local optimum; never increases cost.
Tour two_opt(const TspInstance& inst, const Tour& tour, int neighbor_limit = 0);

/// Best 2-opt tour over seeded random nearest-neighbor starts, emitted as a
/// closed trajectory. Deterministic for a fixed seed.
Trajectory plan_tsp(const EnvironmentMap& map, const TspConfig& cfg);

/// Same as plan_tsp but also returns the tour for warm starts.
Tour plan_tsp_tour(const EnvironmentMap& map, const TspConfig& cfg, TspInstance* out_inst = nullptr);

double tour_cost(const TspInstance& inst, const std::vector<int>& order);
double tour_euclidean_length(const TspInstance& inst, const std::vector<int>& order);

}  // namespace coverplan
