#include "coverplan/map_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace coverplan {

using nlohmann::json;

namespace {

std::vector<Point2> points_from_json(const json& arr, const char* what) {
    if (!arr.is_array()) throw ValidationError(std::string(what) + " must be an array");
    std::vector<Point2> out;
    out.reserve(arr.size());
    for (const auto& p : arr) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw ValidationError(std::string(what) + " entries must be [x, y] numbers");
        out.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return out;
}

json points_to_json(const std::vector<Point2>& pts) {
    json arr = json::array();
    for (const Point2& p : pts) arr.push_back({p.x, p.y});
    return arr;
}

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ValidationError("malformed JSON");
    return j;
}

}  // namespace

EnvironmentMap map_from_json(const std::string& text) {
    const json j = parse(text);
    if (!j.contains("boundary") || !j.contains("detection_radius"))
        throw ValidationError("map JSON requires boundary and detection_radius");
    EnvironmentMap map;
    map.boundary.vertices = points_from_json(j["boundary"], "boundary");
    if (j.contains("obstacles")) {
        for (const auto& obs : j["obstacles"])
            map.obstacles.push_back(Polygon{points_from_json(obs, "obstacle")});
    }
    if (!j["detection_radius"].is_number())
        throw ValidationError("detection_radius must be a number");
    map.detection_radius = j["detection_radius"].get<double>();
    map.validate();
    return map;
}

std::string map_to_json(const EnvironmentMap& map) {
    json j;
    j["boundary"] = points_to_json(map.boundary.vertices);
    j["obstacles"] = json::array();
    for (const Polygon& obs : map.obstacles) j["obstacles"].push_back(points_to_json(obs.vertices));
    j["detection_radius"] = map.detection_radius;
    return j.dump(2) + "\n";
}

Trajectory trajectory_from_json(const std::string& text) {
    const json j = parse(text);
    if (!j.contains("points")) throw ValidationError("trajectory JSON requires points");
    Trajectory traj;
    traj.points = points_from_json(j["points"], "points");
    traj.closed = j.value("closed", false);
    if (j.contains("timestamps")) traj.timestamps = j["timestamps"].get<std::vector<double>>();
    return traj;
}

std::string trajectory_to_json(const Trajectory& traj, double final_cost) {
    json j;
    j["points"] = points_to_json(traj.points);
    j["closed"] = traj.closed;
    if (!traj.timestamps.empty()) j["timestamps"] = traj.timestamps;
    if (!std::isnan(final_cost)) j["final_cost"] = final_cost;
    return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << content;
    if (!out) throw ValidationError("write failed: " + path);
}

EnvironmentMap load_map(const std::string& path) { return map_from_json(read_file(path)); }
void save_map(const EnvironmentMap& map, const std::string& path) {
    write_file(path, map_to_json(map));
}

Trajectory load_trajectory(const std::string& path) {
    return trajectory_from_json(read_file(path));
}
void save_trajectory(const Trajectory& traj, const std::string& path, double final_cost) {
    write_file(path, trajectory_to_json(traj, final_cost));
}

}  // namespace coverplan
