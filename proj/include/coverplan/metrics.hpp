#pragma once

#include <string>

#include "coverplan/geometry.hpp"
#include "coverplan/trajectory.hpp"

namespace coverplan {

struct CoverageReport {
    double uar_percent = 0.0;
    double alop = 0.0;
    double path_length = 0.0;
    double covered_area = 0.0;
    double free_area = 0.0;
    double plan_time = 0.0;  // seconds, filled by the caller around the planner
};

/// Sum of segment lengths; the closing segment counts iff the flag is set.
double path_length(const Trajectory& traj);

/// Raster sweep: a free cell is covered iff its center lies within r of some
/// point of the polyline. Returns (covered_area, uar_percent).
std::pair<double, double> coverage(const Trajectory& traj, const EnvironmentMap& map,
                                   double cell);

/// path_length * r / covered_area.
double alop(double path_length, double detection_radius, double covered_area);

/// Full report at the given raster cell (<= 0 selects r / 10).
CoverageReport score(const Trajectory& traj, const EnvironmentMap& map, double cell = 0.0);

std::string report_to_json(const CoverageReport& report);
CoverageReport report_from_json(const std::string& text);

}  // namespace coverplan
