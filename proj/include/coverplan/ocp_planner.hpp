#pragma once

#include <vector>

#include "coverplan/geometry.hpp"
#include "coverplan/trajectory.hpp"

namespace coverplan {

/// Smooth approximation of an r-disk sensor footprint.
struct DetectionParams {
    double gamma = 1.0;      // max detection rate, 1/s
    double steepness = 20.0; // transition sharpness (a)
    double radius = 1.0;     // footprint radius r, m
};

/// Range-dependent scan process with a normal-CDF falloff.
struct PoissonScanParams {
    double intensity = 1.0;  // lambda, 1/s
    double threshold = 1.0;  // F
    double decay = 1.0;      // a, 1/m^2
    double spread = 1.0;     // sigma
};

struct CostTerms {
    double detection = 0.0;  // expected non-detection mass
    double penalty = 0.0;    // obstacle proximity
    double length = 0.0;     // control-effort regularizer
    double total = 0.0;
};

struct OcpProblem {
    EnvironmentMap map;
    int step_count = 400;   // N
    double horizon = 0.0;   // T seconds; <= 0 selects warm-start auto scaling
    DetectionParams detection;
    double v_max = 1.0;
    Point2 box_min, box_max;
    Point2 start, goal;
    double lambda_len = 0.01;
    double d_avoid = 0.0;             // <= 0 selects detection radius
    std::vector<Point2> omega;        // target samples in the free space
    std::vector<double> omega_weight; // sums to 1
    std::vector<Point2> obstacle_points;
    double tol = 1e-6;                // relative cost-change stop
    int max_iters = 2000;

    double dt() const { return horizon / step_count; }
    void validate() const;
};

struct OcpSolution {
    std::vector<Point2> states;    // N+1, exact Euler rollout of controls
    std::vector<Point2> controls;  // N
    std::vector<double> cost_history;
    double final_cost = 0.0;
    CostTerms final_terms;
    double horizon = 0.0;
    int iterations = 0;
};

/// gamma * (pi/2 - atan(a * (||ps - pt||^2 / r^2 - 1))) / pi.
double detection_rate(Point2 p_s, Point2 p_t, const DetectionParams& params);

/// lambda * Phi((F - a * ||ps - pt||^2) / sigma), Phi the standard normal CDF.
double poisson_scan_rate(Point2 p_s, Point2 p_t, const PoissonScanParams& params);

/// exp(-sum_k eta(p_k, omega) * dt) over the first N states.
double nondetection_probability(const std::vector<Point2>& states, Point2 omega,
                                const OcpProblem& problem);

CostTerms cost_terms(const std::vector<Point2>& states, const std::vector<Point2>& controls,
                     const OcpProblem& problem);
double cost(const std::vector<Point2>& states, const std::vector<Point2>& controls,
            const OcpProblem& problem);

/// Analytic dJ/du through the Euler chain; matches central differences.
std::vector<Point2> cost_gradient(const std::vector<Point2>& states,
                                  const std::vector<Point2>& controls,
                                  const OcpProblem& problem);

std::vector<Point2> propagate(Point2 start, const std::vector<Point2>& controls, double dt);

/// Arc-length resampling of a warm-start path to N controls with speed
/// margin; throws when the horizon cannot accommodate the endpoints.
void resample_warm_start(const Trajectory& warm, const OcpProblem& problem,
                         std::vector<Point2>& states, std::vector<Point2>& controls);

/// Projected gradient descent with backtracking line search from the warm
/// start; cost history is nonincreasing and the final cost never exceeds the
/// warm-start cost.
OcpSolution plan_ocp(OcpProblem problem, const Trajectory& warm_start);

struct OcpSettings {
    int step_count = 400;
    double horizon = 0.0;  // <= 0: auto from warm-start length
    double v_max = 1.0;
    double gamma = 1.0;
    double steepness = 20.0;
    double lambda_len = 0.01;
    double d_avoid = 0.0;  // <= 0: detection radius
    int omega_samples = 400;
    double tol = 1e-6;
    int max_iters = 2000;
};

/// Coverage problem over a map: uniform target prior on the free space,
/// obstacle sample points at r/2 spacing, box bounds from the map bbox, and
/// endpoints pinned to the warm start's first waypoint.
OcpProblem make_coverage_problem(const EnvironmentMap& map, const OcpSettings& settings,
                                 const Trajectory& warm_start);

Trajectory solution_to_trajectory(const OcpSolution& sol);

}  // namespace coverplan
