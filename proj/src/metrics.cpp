#include "coverplan/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace coverplan {

double path_length(const Trajectory& traj) {
    if (traj.points.size() < 2) throw ValidationError("path_length: need at least 2 waypoints");
    double len = 0.0;
    for (size_t i = 0; i + 1 < traj.points.size(); ++i)
        len += dist(traj.points[i], traj.points[i + 1]);
    if (traj.closed) len += dist(traj.points.back(), traj.points.front());
    return len;
}

std::pair<double, double> coverage(const Trajectory& traj, const EnvironmentMap& map,
                                   double cell) {
    const double r = map.detection_radius;
    if (!(cell > 0.0) || cell > r / 5.0 + 1e-12)
        throw ValidationError("coverage: cell must be in (0, r/5]");
    const RasterGrid free = rasterize(map, cell);

    std::vector<uint8_t> covered(free.cells.size(), 0);
    auto stamp_segment = [&](Point2 a, Point2 b) {
        const int x0 = std::max(
            0, static_cast<int>(std::floor((std::min(a.x, b.x) - r - free.origin.x) / cell)));
        const int x1 = std::min(
            free.width - 1,
            static_cast<int>(std::floor((std::max(a.x, b.x) + r - free.origin.x) / cell)));
        const int y0 = std::max(
            0, static_cast<int>(std::floor((std::min(a.y, b.y) - r - free.origin.y) / cell)));
        const int y1 = std::min(
            free.height - 1,
            static_cast<int>(std::floor((std::max(a.y, b.y) + r - free.origin.y) / cell)));
        for (int iy = y0; iy <= y1; ++iy) {
            for (int ix = x0; ix <= x1; ++ix) {
                const size_t idx = static_cast<size_t>(iy) * free.width + ix;
                if (covered[idx]) continue;
                if (dist_point_segment(free.center(ix, iy), a, b) <= r) covered[idx] = 1;
            }
        }
    };

    const auto& pts = traj.points;
    if (pts.empty()) throw ValidationError("coverage: empty trajectory");
    if (pts.size() == 1) {
        stamp_segment(pts[0], pts[0]);
    } else {
        for (size_t i = 0; i + 1 < pts.size(); ++i) stamp_segment(pts[i], pts[i + 1]);
        if (traj.closed) stamp_segment(pts.back(), pts.front());
    }

    size_t free_cells = 0, covered_cells = 0;
    for (size_t i = 0; i < free.cells.size(); ++i) {
        if (!free.cells[i]) continue;
        ++free_cells;
        covered_cells += covered[i];
    }
    if (free_cells == 0) return {0.0, 100.0};
    const double covered_area = static_cast<double>(covered_cells) * cell * cell;
    const double uar =
        100.0 * static_cast<double>(free_cells - covered_cells) / static_cast<double>(free_cells);
    return {covered_area, uar};
}

double alop(double path_length, double detection_radius, double covered_area) {
    if (!(covered_area > 0.0)) throw ValidationError("alop: covered_area must be > 0");
    return path_length * detection_radius / covered_area;
}

CoverageReport score(const Trajectory& traj, const EnvironmentMap& map, double cell) {
    const double c = cell > 0.0 ? cell : map.detection_radius / 10.0;
    CoverageReport report;
    report.path_length = traj.points.size() >= 2 ? path_length(traj) : 0.0;
    const auto [covered_area, uar] = coverage(traj, map, c);
    report.covered_area = covered_area;
    report.uar_percent = uar;
    const RasterGrid free = rasterize(map, c);
    report.free_area = static_cast<double>(free.count_set()) * c * c;
    report.alop = covered_area > 0.0 ? alop(report.path_length, map.detection_radius, covered_area)
                                     : 0.0;
    return report;
}

std::string report_to_json(const CoverageReport& report) {
    nlohmann::json j;
    j["uar_percent"] = report.uar_percent;
    j["alop"] = report.alop;
    j["path_length"] = report.path_length;
    j["covered_area"] = report.covered_area;
    j["free_area"] = report.free_area;
    j["plan_time"] = report.plan_time;
    return j.dump(2) + "\n";
}

CoverageReport report_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    CoverageReport report;
    report.uar_percent = j.at("uar_percent").get<double>();
    report.alop = j.at("alop").get<double>();
    report.path_length = j.at("path_length").get<double>();
    report.covered_area = j.at("covered_area").get<double>();
    report.free_area = j.at("free_area").get<double>();
    report.plan_time = j.value("plan_time", 0.0);
    return report;
}

}  // namespace coverplan
