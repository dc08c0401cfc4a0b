#pragma once

#include <vector>

#include "coverplan/geometry.hpp"

namespace coverplan {

/// Ordered waypoint sequence. When `closed` is set the segment from the last
/// point back to the first is part of the path. `timestamps` and `controls`
/// are optional (empty when absent); when present, timestamps has one entry
/// per point and controls one entry per step.
struct Trajectory {
    std::vector<Point2> points;
    bool closed = false;
    std::vector<double> timestamps;
    std::vector<Point2> controls;
};

}  // namespace coverplan
