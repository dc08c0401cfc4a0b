#include "coverplan/tsp_planner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <future>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

namespace coverplan {

namespace {

void check_config(const TspConfig& cfg) {
    if (cfg.restarts < 1) throw ValidationError("restarts must be >= 1");
}

int thread_budget(int requested) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("COVERPLAN_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) hw = std::min(hw, cap);
    }
    if (requested >= 1) hw = std::min(hw, requested);
    return hw;
}

}  // namespace

double tour_cost(const TspInstance& inst, const std::vector<int>& order) {
    double c = 0.0;
    const size_t n = order.size();
    for (size_t k = 0; k < n; ++k) c += inst.at(order[k], order[(k + 1) % n]);
    return c;
}

double tour_euclidean_length(const TspInstance& inst, const std::vector<int>& order) {
    double len = 0.0;
    const size_t n = order.size();
    if (n < 2) return 0.0;
    for (size_t k = 0; k < n; ++k)
        len += dist(inst.nodes[order[k]], inst.nodes[order[(k + 1) % n]]);
    return len;
}

TspInstance build_instance(const EnvironmentMap& map, const TspConfig& cfg) {
    map.validate();
    check_config(cfg);
    const double r = map.detection_radius;
    const double spacing = r;  // half the 2r planner grid pitch
    const BBox bb = map.bbox();

    TspInstance inst;
    const int nx =
        bb.width() >= spacing
            ? static_cast<int>(std::floor((bb.width() - spacing) / spacing + 1e-9)) + 1
            : 0;
    const int ny =
        bb.height() >= spacing
            ? static_cast<int>(std::floor((bb.height() - spacing) / spacing + 1e-9)) + 1
            : 0;
    const double x0 = bb.min.x + (bb.width() - (nx > 0 ? (nx - 1) * spacing : 0.0)) / 2.0;
    const double y0 = bb.min.y + (bb.height() - (ny > 0 ? (ny - 1) * spacing : 0.0)) / 2.0;
    for (int row = 0; row < ny; ++row) {
        for (int c = 0; c < nx; ++c) {
            const Point2 p{x0 + c * spacing, y0 + row * spacing};
            if (map.free_contains(p)) inst.nodes.push_back(p);
        }
    }
    const int n = inst.size();
    if (n < 2) throw PlannerError("build_instance: fewer than 2 mesh nodes");

    inst.penalty = cfg.penalty > 0.0 ? cfg.penalty : 1e6 * bb.diagonal();
    inst.cost.assign(static_cast<size_t>(n) * n, 0.0);

    // Obstacle bboxes (plus nothing: segments between nodes stay within the
    // domain bbox) let most pairs skip the exact segment tests.
    std::vector<BBox> obb;
    obb.reserve(map.obstacles.size());
    for (const Polygon& obs : map.obstacles) obb.push_back(obs.bbox());

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Point2 a = inst.nodes[i];
            const Point2 b = inst.nodes[j];
            double c = dist(a, b);
            for (size_t o = 0; o < map.obstacles.size(); ++o) {
                if (std::max(a.x, b.x) < obb[o].min.x || std::min(a.x, b.x) > obb[o].max.x ||
                    std::max(a.y, b.y) < obb[o].min.y || std::min(a.y, b.y) > obb[o].max.y)
                    continue;
                if (segment_intersects_polygon(a, b, map.obstacles[o])) {
                    c = inst.penalty;
                    break;
                }
            }
            inst.cost[static_cast<size_t>(i) * n + j] = c;
            inst.cost[static_cast<size_t>(j) * n + i] = c;
        }
    }
    return inst;
}

Tour nearest_neighbor_tour(const TspInstance& inst, int start) {
    const int n = inst.size();
    if (start < 0 || start >= n) throw ValidationError("nearest_neighbor_tour: bad start index");
    Tour tour;
    tour.order.reserve(n);
    std::vector<char> visited(n, 0);
    int current = start;
    tour.order.push_back(current);
    visited[current] = 1;
    for (int step = 1; step < n; ++step) {
        int best = -1;
        double best_cost = std::numeric_limits<double>::infinity();
        for (int cand = 0; cand < n; ++cand) {
            if (visited[cand]) continue;
            const double c = inst.at(current, cand);
            if (c < best_cost) {  // strict: ties stay with the lowest index
                best_cost = c;
                best = cand;
            }
        }
        visited[best] = 1;
        tour.order.push_back(best);
        current = best;
    }
    tour.cost = tour_cost(inst, tour.order);
    tour.length = tour_euclidean_length(inst, tour.order);
    return tour;
}

namespace {

// 2-opt exchange of edges (i, i+1) and (j, j+1), applied by reversing the
// order segment [i+1, j].
double exchange_delta(const TspInstance& inst, const std::vector<int>& order, int i, int j) {
    const int n = static_cast<int>(order.size());
    const int a = order[i], b = order[i + 1];
    const int c = order[j], d = order[(j + 1) % n];
    return inst.at(a, c) + inst.at(b, d) - inst.at(a, b) - inst.at(c, d);
}

// Nearest-neighbor candidate lists, built once per instance.
std::vector<std::vector<int>> build_near_lists(const TspInstance& inst, int k_limit) {
    const int n = inst.size();
    const int k = std::min(std::max(k_limit, 1), n - 1);
    std::vector<std::vector<int>> near(n);
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) {
        idx.clear();
        for (int j = 0; j < n; ++j)
            if (j != i) idx.push_back(j);
        std::partial_sort(idx.begin(), idx.begin() + k, idx.end(),
                          [&](int a, int b) { return inst.at(i, a) < inst.at(i, b); });
        near[i].assign(idx.begin(), idx.begin() + k);
    }
    return near;
}

// Candidate-list pass: for each node pair drawn from the nearest-neighbor
// lists, apply the first improving exchange and rescan. Leaves most of the
// improving work done; the exhaustive sweeps afterwards certify stability.
void neighbor_list_pass(const TspInstance& inst, std::vector<int>& order,
                        const std::vector<std::vector<int>>& near) {
    const int n = static_cast<int>(order.size());
    if (n < 4) return;

    std::vector<int> pos(n);
    auto reindex = [&] {
        for (int p = 0; p < n; ++p) pos[order[p]] = p;
    };
    reindex();

    std::vector<char> dont_look(n, 0);
    bool any = true;
    int guard = 0;
    while (any && guard++ < 200) {
        any = false;
        for (int a = 0; a < n; ++a) {
            if (dont_look[a]) continue;
            bool improved_here = false;
            const int pa = pos[a];
            for (int cand : near[a]) {
                // Try the exchange that would create edge (a, cand).
                int i = std::min(pa, pos[cand]);
                int j = std::max(pa, pos[cand]);
                if (j - i < 2 || (i == 0 && j == n - 1)) continue;
                // Edge pair ((i-1?, ...)) — use (i, i+1) x (j, j+1) form:
                if (i + 1 <= j - 1) {
                    const double delta = exchange_delta(inst, order, i, j);
                    if (delta < -1e-12) {
                        std::reverse(order.begin() + i + 1, order.begin() + j + 1);
                        reindex();
                        dont_look[order[i]] = dont_look[order[(i + 1) % n]] = 0;
                        dont_look[order[j]] = dont_look[order[(j + 1) % n]] = 0;
                        improved_here = true;
                        any = true;
                        break;
                    }
                }
            }
            if (!improved_here) dont_look[a] = 1;
        }
    }
}

// Exhaustive first-improvement sweeps until a full pass applies no exchange.
void full_two_opt(const TspInstance& inst, std::vector<int>& order) {
    const int n = static_cast<int>(order.size());
    if (n < 4) return;
    bool improved = true;
    while (improved) {
        improved = false;
        for (int i = 0; i < n - 2; ++i) {
            const int j_max = (i == 0) ? n - 2 : n - 1;
            for (int j = i + 2; j <= j_max; ++j) {
                const double delta = exchange_delta(inst, order, i, j);
                if (delta < -1e-12) {
                    std::reverse(order.begin() + i + 1, order.begin() + j + 1);
                    improved = true;
                }
            }
        }
    }
}

Tour two_opt_impl(const TspInstance& inst, const Tour& tour,
                  const std::vector<std::vector<int>>& near) {
    const int n = inst.size();
    if (static_cast<int>(tour.order.size()) != n)
        throw ValidationError("two_opt: tour size mismatch");
    Tour out = tour;
    if (n >= 4) {
        neighbor_list_pass(inst, out.order, near);
        full_two_opt(inst, out.order);
    }
    out.cost = tour_cost(inst, out.order);
    out.length = tour_euclidean_length(inst, out.order);
    return out;
}

}  // namespace

Tour two_opt(const TspInstance& inst, const Tour& tour, int neighbor_limit) {
    return two_opt_impl(inst, tour,
                        build_near_lists(inst, neighbor_limit > 0 ? neighbor_limit : 24));
}

Tour plan_tsp_tour(const EnvironmentMap& map, const TspConfig& cfg, TspInstance* out_inst) {
    check_config(cfg);
    TspInstance inst = build_instance(map, cfg);
    const int n = inst.size();
    const auto near = build_near_lists(inst, cfg.neighbor_limit > 0 ? cfg.neighbor_limit : 24);

    auto run_restart = [&](int k) {
        std::seed_seq seq{static_cast<uint64_t>(cfg.rng_seed), static_cast<uint64_t>(k)};
        std::mt19937_64 rng(seq);
        const int start = static_cast<int>(rng() % static_cast<uint64_t>(n));
        Tour t = nearest_neighbor_tour(inst, start);
        return two_opt_impl(inst, t, near);
    };

    std::vector<Tour> results(cfg.restarts);
    const int threads = std::min(thread_budget(cfg.max_threads), cfg.restarts);
    if (threads <= 1) {
        for (int k = 0; k < cfg.restarts; ++k) results[k] = run_restart(k);
    } else {
        std::vector<std::future<void>> jobs;
        std::atomic<int> next{0};
        for (int t = 0; t < threads; ++t) {
            jobs.push_back(std::async(std::launch::async, [&] {
                for (int k = next.fetch_add(1); k < cfg.restarts; k = next.fetch_add(1))
                    results[k] = run_restart(k);
            }));
        }
        for (auto& job : jobs) job.get();
    }

    int best = 0;
    for (int k = 1; k < cfg.restarts; ++k)
        if (results[k].cost < results[best].cost) best = k;  // ties keep lowest index

    Tour winner = results[best];
    for (size_t k = 0; k < winner.order.size(); ++k) {
        const double c = inst.at(winner.order[k], winner.order[(k + 1) % winner.order.size()]);
        if (c >= inst.penalty) winner.uses_penalized_edge = true;
    }
    if (winner.uses_penalized_edge)
        std::cerr << "plan_tsp: tour crosses an obstacle (mesh disconnected by obstacles)\n";
    if (out_inst) *out_inst = std::move(inst);
    return winner;
}

Trajectory plan_tsp(const EnvironmentMap& map, const TspConfig& cfg) {
    TspInstance inst;
    const Tour tour = plan_tsp_tour(map, cfg, &inst);
    Trajectory traj;
    traj.closed = true;
    traj.points.reserve(tour.order.size());
    for (int id : tour.order) traj.points.push_back(inst.nodes[id]);
    return traj;
}

}  // namespace coverplan
