#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "coverplan/geometry.hpp"
#include "coverplan/metrics.hpp"
#include "coverplan/mst_planner.hpp"
#include "coverplan/ocp_planner.hpp"
#include "coverplan/trajectory.hpp"
#include "coverplan/tsp_planner.hpp"

namespace coverplan {

struct BenchConfig {
    int samples = 10;
    uint64_t rng_seed = 1;
    double domain_size = 40.0;       // square domain side, meters
    int obstacle_count_min = 2;
    int obstacle_count_max = 4;
    double obstacle_scale = 3.0;     // circumradius scale of random obstacles
    double detection_radius = 1.0;
    double metric_cell = 0.0;        // <= 0: r / 10
    double mst_epsilon = 0.01;
    TspConfig tsp;
    OcpSettings ocp;
};

struct BenchRow {
    std::string algorithm;
    int sample_id = 0;
    bool ok = false;
    std::string error;
    double uar_percent = 0.0;
    double alop = 0.0;
    double path_length = 0.0;
    double plan_time_s = 0.0;
    // OCP bookkeeping used by the verification suite.
    bool ocp_cost_monotone = true;
    double ocp_initial_cost = 0.0;
    double ocp_final_cost = 0.0;
};

struct BenchSummary {
    std::string algorithm;
    int count = 0;
    double mean_uar = 0.0, std_uar = 0.0;
    double mean_alop = 0.0, std_alop = 0.0;
    double mean_path_length = 0.0, std_path_length = 0.0;
    double mean_time = 0.0, std_time = 0.0;
};

struct BenchResult {
    std::vector<BenchRow> rows;
    std::vector<BenchSummary> summary;            // tsp, mst-hex, mst-square, ocp
    std::vector<Trajectory> trajectories;         // parallel to rows
    std::vector<EnvironmentMap> maps;             // per sample
};

/// Deterministic random map: square domain with convex polygon obstacles
/// (5-8 vertices) placed fully inside the boundary.
EnvironmentMap generate_map(uint64_t seed, const BenchConfig& cfg);

/// Plans tsp, mst-hex, mst-square and ocp (warm-started from the tsp tour)
/// on each sample, scores every trajectory, and aggregates per-algorithm
/// means and sample standard deviations. Individual planner failures become
/// failed rows; the bench continues.
BenchResult run_bench(const BenchConfig& cfg, std::ostream* log = nullptr);

std::string rows_to_csv(const std::vector<BenchRow>& rows);
std::string summary_to_csv(const std::vector<BenchSummary>& summary);

BenchConfig bench_config_from_json(const std::string& text);
std::string bench_config_to_json(const BenchConfig& cfg);

uint64_t splitmix64(uint64_t x);

}  // namespace coverplan
