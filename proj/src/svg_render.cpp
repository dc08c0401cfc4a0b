#include "coverplan/svg_render.hpp"

#include <cstdio>
#include <sstream>

#include "coverplan/map_io.hpp"

namespace coverplan {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

}  // namespace

std::string render_svg(const EnvironmentMap& map, const Trajectory& traj,
                       const SvgOptions& opts) {
    map.validate();
    BBox bb = map.bbox();
    bb.expand(map.detection_radius);
    const double scale =
        opts.pixels_per_meter > 0.0
            ? opts.pixels_per_meter
            : 900.0 / std::max(bb.width(), bb.height());
    const double pad = 10.0;
    const double w = bb.width() * scale + 2 * pad;
    const double h = bb.height() * scale + 2 * pad;
    // SVG is y-down; the map is y-up.
    auto X = [&](double x) { return pad + (x - bb.min.x) * scale; };
    auto Y = [&](double y) { return pad + (bb.max.y - y) * scale; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w) << "\" height=\""
        << fmt(h) << "\" viewBox=\"0 0 " << fmt(w) << " " << fmt(h) << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
        << "\" fill=\"#ffffff\"/>\n";

    auto polygon_points = [&](const Polygon& poly) {
        std::string s;
        for (size_t i = 0; i < poly.vertices.size(); ++i) {
            if (i) s += " ";
            s += fmt(X(poly.vertices[i].x)) + "," + fmt(Y(poly.vertices[i].y));
        }
        return s;
    };

    out << "<polygon points=\"" << polygon_points(map.boundary)
        << "\" fill=\"#eef6fb\" stroke=\"#1f4e79\" stroke-width=\"1.5\"/>\n";
    for (const Polygon& obs : map.obstacles)
        out << "<polygon points=\"" << polygon_points(obs)
            << "\" fill=\"#8c8c8c\" stroke=\"#4d4d4d\" stroke-width=\"1\"/>\n";

    if (!traj.points.empty()) {
        std::string pts;
        for (size_t i = 0; i < traj.points.size(); ++i) {
            if (i) pts += " ";
            pts += fmt(X(traj.points[i].x)) + "," + fmt(Y(traj.points[i].y));
        }
        if (traj.closed && traj.points.size() > 1)
            pts += " " + fmt(X(traj.points.front().x)) + "," + fmt(Y(traj.points.front().y));
        if (opts.draw_swath) {
            out << "<polyline points=\"" << pts
                << "\" fill=\"none\" stroke=\"#7fbf7f\" stroke-opacity=\"0.35\" stroke-width=\""
                << fmt(2.0 * map.detection_radius * scale)
                << "\" stroke-linecap=\"round\" stroke-linejoin=\"round\"/>\n";
        }
        out << "<polyline points=\"" << pts
            << "\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\"/>\n";
        out << "<circle cx=\"" << fmt(X(traj.points.front().x)) << "\" cy=\""
            << fmt(Y(traj.points.front().y)) << "\" r=\"3\" fill=\"#c0392b\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void render_svg_file(const EnvironmentMap& map, const Trajectory& traj, const std::string& path,
                     const SvgOptions& opts) {
    write_file(path, render_svg(map, traj, opts));
}

}  // namespace coverplan
