#pragma once

#include <limits>
#include <string>

#include "coverplan/geometry.hpp"
#include "coverplan/trajectory.hpp"

namespace coverplan {

// Map JSON:
//   {"boundary": [[x,y],...], "obstacles": [[[x,y],...],...], "detection_radius": r}
// Trajectory JSON:
//   {"points": [[x,y],...], "closed": true}
// plus optional "timestamps" and "final_cost" (written by the OCP planner).

EnvironmentMap map_from_json(const std::string& text);
std::string map_to_json(const EnvironmentMap& map);
EnvironmentMap load_map(const std::string& path);
void save_map(const EnvironmentMap& map, const std::string& path);

Trajectory trajectory_from_json(const std::string& text);
std::string trajectory_to_json(const Trajectory& traj, double final_cost = std::numeric_limits<double>::quiet_NaN());
Trajectory load_trajectory(const std::string& path);
void save_trajectory(const Trajectory& traj, const std::string& path,
                     double final_cost = std::numeric_limits<double>::quiet_NaN());

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace coverplan
