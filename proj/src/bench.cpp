#include "coverplan/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include <json.hpp>

namespace coverplan {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

void check_config(const BenchConfig& cfg) {
    if (cfg.samples < 1) throw ValidationError("bench: samples must be >= 1");
    if (!(cfg.domain_size > 0.0)) throw ValidationError("bench: domain_size must be > 0");
    if (cfg.obstacle_count_min < 0 || cfg.obstacle_count_max < cfg.obstacle_count_min)
        throw ValidationError("bench: bad obstacle count range");
    if (!(cfg.detection_radius > 0.0))
        throw ValidationError("bench: detection_radius must be > 0");
}

bool convex_ccw(const std::vector<Point2>& v) {
    const size_t n = v.size();
    for (size_t i = 0; i < n; ++i) {
        const Point2 a = v[i], b = v[(i + 1) % n], c = v[(i + 2) % n];
        if (cross(b - a, c - b) <= 0.0) return false;
    }
    return true;
}

}  // namespace

EnvironmentMap generate_map(uint64_t seed, const BenchConfig& cfg) {
    check_config(cfg);
    const double side = cfg.domain_size;
    EnvironmentMap map;
    map.boundary = Polygon{{{0, 0}, {side, 0}, {side, side}, {0, side}}};
    map.detection_radius = cfg.detection_radius;

    std::mt19937_64 rng(splitmix64(seed));
    std::uniform_int_distribution<int> count_dist(cfg.obstacle_count_min, cfg.obstacle_count_max);
    const int k = count_dist(rng);
    std::uniform_int_distribution<int> nv_dist(5, 8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double margin = 0.02 * side;

    for (int o = 0; o < k; ++o) {
        bool placed = false;
        for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
            const int nv = nv_dist(rng);
            const Point2 center{margin + cfg.obstacle_scale +
                                    unit(rng) * (side - 2 * (margin + cfg.obstacle_scale)),
                                margin + cfg.obstacle_scale +
                                    unit(rng) * (side - 2 * (margin + cfg.obstacle_scale))};
            std::vector<double> angles(nv);
            for (int i = 0; i < nv; ++i)
                angles[i] = 2.0 * M_PI * (i + 0.35 * (unit(rng) - 0.5)) / nv;
            std::sort(angles.begin(), angles.end());
            Polygon poly;
            for (int i = 0; i < nv; ++i) {
                const double rad = cfg.obstacle_scale * (0.55 + 0.45 * unit(rng));
                poly.vertices.push_back(
                    {center.x + rad * std::cos(angles[i]), center.y + rad * std::sin(angles[i])});
            }
            if (!convex_ccw(poly.vertices)) continue;
            bool inside = true;
            for (const Point2& v : poly.vertices)
                if (v.x < margin || v.x > side - margin || v.y < margin || v.y > side - margin)
                    inside = false;
            if (!inside) continue;  // overlaps the boundary edge region
            map.obstacles.push_back(std::move(poly));
            placed = true;
        }
        if (!placed) throw PlannerError("generate_map: could not place obstacle");
    }
    map.validate();
    return map;
}

namespace {

double now_between(const std::chrono::steady_clock::time_point& a,
                   const std::chrono::steady_clock::time_point& b) {
    return std::chrono::duration<double>(b - a).count();
}

BenchSummary summarize(const std::string& algo, const std::vector<BenchRow>& rows) {
    BenchSummary s;
    s.algorithm = algo;
    std::vector<const BenchRow*> mine;
    for (const BenchRow& r : rows)
        if (r.algorithm == algo && r.ok) mine.push_back(&r);
    s.count = static_cast<int>(mine.size());
    if (mine.empty()) return s;
    auto mean_of = [&](auto get) {
        double m = 0.0;
        for (const BenchRow* r : mine) m += get(*r);
        return m / mine.size();
    };
    auto std_of = [&](auto get, double mean) {
        if (mine.size() < 2) return 0.0;
        double acc = 0.0;
        for (const BenchRow* r : mine) {
            const double d = get(*r) - mean;
            acc += d * d;
        }
        return std::sqrt(acc / (mine.size() - 1));
    };
    auto uar = [](const BenchRow& r) { return r.uar_percent; };
    auto al = [](const BenchRow& r) { return r.alop; };
    auto len = [](const BenchRow& r) { return r.path_length; };
    auto tm = [](const BenchRow& r) { return r.plan_time_s; };
    s.mean_uar = mean_of(uar);
    s.std_uar = std_of(uar, s.mean_uar);
    s.mean_alop = mean_of(al);
    s.std_alop = std_of(al, s.mean_alop);
    s.mean_path_length = mean_of(len);
    s.std_path_length = std_of(len, s.mean_path_length);
    s.mean_time = mean_of(tm);
    s.std_time = std_of(tm, s.mean_time);
    return s;
}

}  // namespace

BenchResult run_bench(const BenchConfig& cfg, std::ostream* log) {
    check_config(cfg);
    BenchResult result;
    const double cell = cfg.metric_cell > 0.0 ? cfg.metric_cell : cfg.detection_radius / 10.0;
    const BBox domain_bb{{0, 0}, {cfg.domain_size, cfg.domain_size}};

    for (int sample = 0; sample < cfg.samples; ++sample) {
        const uint64_t map_seed = splitmix64(cfg.rng_seed + 0x100 + sample);
        EnvironmentMap map = generate_map(map_seed, cfg);
        result.maps.push_back(map);

        Trajectory tsp_traj;
        bool tsp_ok = false;

        auto record = [&](const std::string& algo, auto&& planner) {
            BenchRow row;
            row.algorithm = algo;
            row.sample_id = sample;
            Trajectory traj;
            try {
                const auto t0 = std::chrono::steady_clock::now();
                traj = planner(row);
                const auto t1 = std::chrono::steady_clock::now();
                row.plan_time_s = now_between(t0, t1);

                for (const Point2& p : traj.points) {
                    if (!is_finite(p)) throw PlannerError("trajectory has non-finite waypoint");
                    if (p.x < domain_bb.min.x - 1e-9 || p.x > domain_bb.max.x + 1e-9 ||
                        p.y < domain_bb.min.y - 1e-9 || p.y > domain_bb.max.y + 1e-9)
                        throw PlannerError("trajectory leaves the domain bounding box");
                }
                const CoverageReport report = score(traj, map, cell);
                row.uar_percent = report.uar_percent;
                row.alop = report.alop;
                row.path_length = report.path_length;
                row.ok = true;
            } catch (const std::exception& e) {
                row.ok = false;
                row.error = e.what();
                const double nan = std::numeric_limits<double>::quiet_NaN();
                row.uar_percent = row.alop = row.path_length = nan;
            }
            if (log)
                (*log) << "sample " << sample << " " << algo << ": "
                       << (row.ok ? "ok" : row.error) << " uar=" << row.uar_percent
                       << " time=" << row.plan_time_s << "s\n";
            result.rows.push_back(row);
            result.trajectories.push_back(std::move(traj));
        };

        record("tsp", [&](BenchRow&) {
            TspConfig tc = cfg.tsp;
            tc.rng_seed = splitmix64(map_seed + 1);
            Trajectory t = plan_tsp(map, tc);
            tsp_traj = t;
            tsp_ok = true;
            return t;
        });
        record("mst-hex", [&](BenchRow&) {
            MstConfig mc;
            mc.epsilon = cfg.mst_epsilon;
            mc.tiling = Tiling::Hexagonal;
            return plan_mst(map, mc);
        });
        record("mst-square", [&](BenchRow&) {
            MstConfig mc;
            mc.epsilon = cfg.mst_epsilon;
            mc.tiling = Tiling::Square;
            return plan_mst(map, mc);
        });
        record("ocp", [&](BenchRow& row) {
            if (!tsp_ok) throw PlannerError("ocp: tsp warm start unavailable");
            OcpProblem problem = make_coverage_problem(map, cfg.ocp, tsp_traj);
            OcpSolution sol = plan_ocp(problem, tsp_traj);
            row.ocp_initial_cost = sol.cost_history.front();
            row.ocp_final_cost = sol.final_cost;
            row.ocp_cost_monotone = true;
            for (size_t i = 1; i < sol.cost_history.size(); ++i)
                if (sol.cost_history[i] > sol.cost_history[i - 1] + 1e-12)
                    row.ocp_cost_monotone = false;
            return solution_to_trajectory(sol);
        });
    }

    for (const char* algo : {"tsp", "mst-hex", "mst-square", "ocp"})
        result.summary.push_back(summarize(algo, result.rows));
    return result;
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

std::string rows_to_csv(const std::vector<BenchRow>& rows) {
    std::string out = "algorithm,sample_id,uar_percent,alop,path_length,plan_time_s\n";
    for (const BenchRow& r : rows) {
        out += r.algorithm + "," + std::to_string(r.sample_id) + "," + num(r.uar_percent) + "," +
               num(r.alop) + "," + num(r.path_length) + "," + num(r.plan_time_s) + "\n";
    }
    return out;
}

std::string summary_to_csv(const std::vector<BenchSummary>& summary) {
    std::string out =
        "algorithm,count,mean_uar_percent,std_uar_percent,mean_alop,std_alop,"
        "mean_path_length,std_path_length,mean_plan_time_s,std_plan_time_s\n";
    for (const BenchSummary& s : summary) {
        out += s.algorithm + "," + std::to_string(s.count) + "," + num(s.mean_uar) + "," +
               num(s.std_uar) + "," + num(s.mean_alop) + "," + num(s.std_alop) + "," +
               num(s.mean_path_length) + "," + num(s.std_path_length) + "," + num(s.mean_time) +
               "," + num(s.std_time) + "\n";
    }
    return out;
}

BenchConfig bench_config_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ValidationError("bench config: malformed JSON");
    BenchConfig cfg;
    cfg.samples = j.value("samples", cfg.samples);
    cfg.rng_seed = j.value("rng_seed", cfg.rng_seed);
    cfg.domain_size = j.value("domain_size", cfg.domain_size);
    if (j.contains("obstacle_count_range")) {
        cfg.obstacle_count_min = j["obstacle_count_range"].at(0).get<int>();
        cfg.obstacle_count_max = j["obstacle_count_range"].at(1).get<int>();
    }
    cfg.obstacle_scale = j.value("obstacle_scale", cfg.obstacle_scale);
    cfg.detection_radius = j.value("detection_radius", cfg.detection_radius);
    cfg.metric_cell = j.value("metric_cell", cfg.metric_cell);
    cfg.mst_epsilon = j.value("mst_epsilon", cfg.mst_epsilon);
    if (j.contains("tsp")) {
        const auto& t = j["tsp"];
        cfg.tsp.restarts = t.value("restarts", cfg.tsp.restarts);
        cfg.tsp.penalty = t.value("penalty", cfg.tsp.penalty);
        cfg.tsp.rng_seed = t.value("rng_seed", cfg.tsp.rng_seed);
    }
    if (j.contains("ocp")) {
        const auto& o = j["ocp"];
        cfg.ocp.step_count = o.value("N", cfg.ocp.step_count);
        cfg.ocp.horizon = o.value("T", cfg.ocp.horizon);
        cfg.ocp.v_max = o.value("v_max", cfg.ocp.v_max);
        cfg.ocp.gamma = o.value("gamma", cfg.ocp.gamma);
        cfg.ocp.steepness = o.value("a", cfg.ocp.steepness);
        cfg.ocp.lambda_len = o.value("lambda", cfg.ocp.lambda_len);
        cfg.ocp.d_avoid = o.value("d_avoid", cfg.ocp.d_avoid);
        cfg.ocp.omega_samples = o.value("M", cfg.ocp.omega_samples);
        cfg.ocp.tol = o.value("tol", cfg.ocp.tol);
        cfg.ocp.max_iters = o.value("max_iters", cfg.ocp.max_iters);
    }
    return cfg;
}

std::string bench_config_to_json(const BenchConfig& cfg) {
    nlohmann::json j;
    j["samples"] = cfg.samples;
    j["rng_seed"] = cfg.rng_seed;
    j["domain_size"] = cfg.domain_size;
    j["obstacle_count_range"] = {cfg.obstacle_count_min, cfg.obstacle_count_max};
    j["obstacle_scale"] = cfg.obstacle_scale;
    j["detection_radius"] = cfg.detection_radius;
    j["metric_cell"] = cfg.metric_cell;
    j["mst_epsilon"] = cfg.mst_epsilon;
    j["tsp"] = {{"restarts", cfg.tsp.restarts},
                {"penalty", cfg.tsp.penalty},
                {"rng_seed", cfg.tsp.rng_seed}};
    j["ocp"] = {{"N", cfg.ocp.step_count},   {"T", cfg.ocp.horizon},
                {"v_max", cfg.ocp.v_max},    {"gamma", cfg.ocp.gamma},
                {"a", cfg.ocp.steepness},    {"lambda", cfg.ocp.lambda_len},
                {"d_avoid", cfg.ocp.d_avoid}, {"M", cfg.ocp.omega_samples},
                {"tol", cfg.ocp.tol},        {"max_iters", cfg.ocp.max_iters}};
    return j.dump(2) + "\n";
}

}  // namespace coverplan
