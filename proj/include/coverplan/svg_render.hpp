#pragma once

#include <string>

#include "coverplan/geometry.hpp"
#include "coverplan/trajectory.hpp"

namespace coverplan {

struct SvgOptions {
    double pixels_per_meter = 0.0;  // <= 0: auto-fit to ~900 px
    bool draw_swath = true;         // translucent band of width 2r under the path
};

/// Self-contained SVG: boundary outline, filled obstacles, trajectory
/// polyline, optional detection swath. Output bytes are deterministic.
std::string render_svg(const EnvironmentMap& map, const Trajectory& traj,
                       const SvgOptions& opts = {});

void render_svg_file(const EnvironmentMap& map, const Trajectory& traj, const std::string& path,
                     const SvgOptions& opts = {});

}  // namespace coverplan
