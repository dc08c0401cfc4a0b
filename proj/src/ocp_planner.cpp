#include "coverplan/ocp_planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace coverplan {

namespace {

constexpr double kPi = 3.14159265358979323846;

double smooth_norm(Point2 u, double mu) { return std::sqrt(u.x * u.x + u.y * u.y + mu * mu); }

}  // namespace

void OcpProblem::validate() const {
    map.validate();
    if (step_count < 2) throw ValidationError("ocp: N must be >= 2");
    if (!(horizon > 0.0)) throw ValidationError("ocp: horizon must be > 0");
    if (!(v_max > 0.0)) throw ValidationError("ocp: v_max must be > 0");
    if (!(detection.gamma > 0.0 && detection.steepness > 0.0 && detection.radius > 0.0))
        throw ValidationError("ocp: detection parameters must be positive");
    if (omega.empty()) throw ValidationError("ocp: no target samples");
    if (omega.size() != omega_weight.size())
        throw ValidationError("ocp: omega/weight size mismatch");
    double wsum = 0.0;
    for (double w : omega_weight) wsum += w;
    if (std::abs(wsum - 1.0) > 1e-6) throw ValidationError("ocp: weights must sum to 1");
    if (box_min.x > box_max.x || box_min.y > box_max.y)
        throw ValidationError("ocp: inverted box bounds");
    if (lambda_len < 0.0) throw ValidationError("ocp: lambda must be >= 0");
}

double detection_rate(Point2 p_s, Point2 p_t, const DetectionParams& params) {
    const double q = dist2(p_s, p_t) / (params.radius * params.radius);
    return params.gamma * (kPi / 2.0 - std::atan(params.steepness * (q - 1.0))) / kPi;
}

double poisson_scan_rate(Point2 p_s, Point2 p_t, const PoissonScanParams& params) {
    const double arg = (params.threshold - params.decay * dist2(p_s, p_t)) / params.spread;
    const double phi = 0.5 * std::erfc(-arg / std::sqrt(2.0));
    return params.intensity * phi;
}

double nondetection_probability(const std::vector<Point2>& states, Point2 omega,
                                const OcpProblem& problem) {
    const double dt = problem.dt();
    double s = 0.0;
    const int n = problem.step_count;
    for (int k = 0; k < n; ++k) s += detection_rate(states[k], omega, problem.detection);
    return std::exp(-s * dt);
}

CostTerms cost_terms(const std::vector<Point2>& states, const std::vector<Point2>& controls,
                     const OcpProblem& problem) {
    const int n = problem.step_count;
    if (static_cast<int>(states.size()) != n + 1 || static_cast<int>(controls.size()) != n)
        throw ValidationError("ocp cost: dimension mismatch");
    const double dt = problem.dt();

    CostTerms terms;
    for (size_t i = 0; i < problem.omega.size(); ++i) {
        double s = 0.0;
        for (int k = 0; k < n; ++k)
            s += detection_rate(states[k], problem.omega[i], problem.detection);
        terms.detection += problem.omega_weight[i] * std::exp(-s * dt);
    }

    const double d_avoid =
        problem.d_avoid > 0.0 ? problem.d_avoid : problem.map.detection_radius;
    const double d2 = d_avoid * d_avoid;
    for (int k = 0; k <= n; ++k)
        for (const Point2& o : problem.obstacle_points)
            terms.penalty += std::exp(-(dist2(states[k], o) - d2));

    const double mu = 1e-6 * problem.v_max;
    for (int k = 0; k < n; ++k) terms.length += smooth_norm(controls[k], mu) * dt;
    terms.length *= problem.lambda_len;

    terms.total = terms.detection + terms.penalty + terms.length;
    return terms;
}

double cost(const std::vector<Point2>& states, const std::vector<Point2>& controls,
            const OcpProblem& problem) {
    return cost_terms(states, controls, problem).total;
}

std::vector<Point2> cost_gradient(const std::vector<Point2>& states,
                                  const std::vector<Point2>& controls,
                                  const OcpProblem& problem) {
    const int n = problem.step_count;
    if (static_cast<int>(states.size()) != n + 1 || static_cast<int>(controls.size()) != n)
        throw ValidationError("ocp gradient: dimension mismatch");
    const double dt = problem.dt();
    const DetectionParams& det = problem.detection;
    const double r2 = det.radius * det.radius;

    std::vector<Point2> state_grad(n + 1, Point2{0.0, 0.0});

    // Detection term: w_i * exp(-S_i), S_i = dt * sum_k eta(p_k, w_i).
    std::vector<double> deta_dq(n);
    for (size_t i = 0; i < problem.omega.size(); ++i) {
        const Point2 w = problem.omega[i];
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
            const double q = dist2(states[k], w) / r2;
            const double t = det.steepness * (q - 1.0);
            s += det.gamma * (kPi / 2.0 - std::atan(t)) / kPi;
            deta_dq[k] = -det.gamma * det.steepness / (kPi * r2 * (1.0 + t * t));
        }
        const double coeff = -problem.omega_weight[i] * std::exp(-s * dt) * dt;
        for (int k = 0; k < n; ++k) {
            const Point2 d = states[k] - w;
            state_grad[k].x += coeff * deta_dq[k] * 2.0 * d.x;
            state_grad[k].y += coeff * deta_dq[k] * 2.0 * d.y;
        }
    }

    // Obstacle proximity term, all N+1 states.
    const double d_avoid =
        problem.d_avoid > 0.0 ? problem.d_avoid : problem.map.detection_radius;
    const double d2 = d_avoid * d_avoid;
    for (int k = 0; k <= n; ++k) {
        for (const Point2& o : problem.obstacle_points) {
            const Point2 d = states[k] - o;
            const double e = std::exp(-(d.x * d.x + d.y * d.y - d2));
            state_grad[k].x += -2.0 * e * d.x;
            state_grad[k].y += -2.0 * e * d.y;
        }
    }

    // Chain rule through p_{k+1} = p_k + dt * u_k: dJ/du_j collects every
    // later state plus the direct length term.
    std::vector<Point2> grad(n, Point2{0.0, 0.0});
    Point2 suffix{0.0, 0.0};
    const double mu = 1e-6 * problem.v_max;
    for (int j = n - 1; j >= 0; --j) {
        suffix = suffix + state_grad[j + 1];
        const double sn = smooth_norm(controls[j], mu);
        grad[j].x = dt * suffix.x + problem.lambda_len * dt * controls[j].x / sn;
        grad[j].y = dt * suffix.y + problem.lambda_len * dt * controls[j].y / sn;
    }
    return grad;
}

std::vector<Point2> propagate(Point2 start, const std::vector<Point2>& controls, double dt) {
    std::vector<Point2> states;
    states.reserve(controls.size() + 1);
    states.push_back(start);
    for (const Point2& u : controls) states.push_back(states.back() + dt * u);
    return states;
}

void resample_warm_start(const Trajectory& warm, const OcpProblem& problem,
                         std::vector<Point2>& states, std::vector<Point2>& controls) {
    if (warm.points.empty()) throw ValidationError("ocp: empty warm start");
    std::vector<Point2> path = warm.points;
    if (warm.closed && dist(path.front(), path.back()) > 0.0) path.push_back(path.front());

    std::vector<double> arc(path.size(), 0.0);
    for (size_t i = 1; i < path.size(); ++i) arc[i] = arc[i - 1] + dist(path[i - 1], path[i]);
    const double total = arc.back();

    const int n = problem.step_count;
    const double dt = problem.dt();
    states.resize(n + 1);
    if (total <= 0.0) {
        std::fill(states.begin(), states.end(), path.front());
    } else {
        size_t seg = 0;
        for (int k = 0; k <= n; ++k) {
            const double s = total * k / n;
            while (seg + 1 < arc.size() && arc[seg + 1] < s) ++seg;
            const double span = arc[seg + 1] - arc[seg];
            const double t = span > 0.0 ? (s - arc[seg]) / span : 0.0;
            states[k] = path[seg] + t * (path[seg + 1] - path[seg]);
        }
    }
    states.front() = problem.start;
    states.back() = problem.goal;

    controls.resize(n);
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
        controls[k] = (1.0 / dt) * (states[k + 1] - states[k]);
        worst = std::max(worst, norm(controls[k]));
    }
    if (worst > problem.v_max * (1.0 + 1e-9))
        throw PlannerError("ocp: warm start infeasible at v_max within horizon T");
}

namespace {

struct Projector {
    const OcpProblem& problem;

    void operator()(std::vector<Point2>& u) const {
        const int n = problem.step_count;
        const double dt = problem.dt();
        const Point2 target = (1.0 / dt) * (problem.goal - problem.start);
        for (int round = 0; round < 60; ++round) {
            // Speed ball.
            for (Point2& uk : u) {
                const double s = norm(uk);
                if (s > problem.v_max) uk = (problem.v_max / s) * uk;
            }
            // Box on states, re-deriving controls from clipped states.
            std::vector<Point2> p = propagate(problem.start, u, dt);
            bool clipped = false;
            for (Point2& pk : p) {
                const double cx = std::clamp(pk.x, problem.box_min.x, problem.box_max.x);
                const double cy = std::clamp(pk.y, problem.box_min.y, problem.box_max.y);
                if (cx != pk.x || cy != pk.y) {
                    pk = {cx, cy};
                    clipped = true;
                }
            }
            if (clipped)
                for (int k = 0; k < n; ++k) u[k] = (1.0 / dt) * (p[k + 1] - p[k]);
            // Endpoint: affine shift so the controls sum to the required
            // displacement exactly.
            Point2 sum{0.0, 0.0};
            for (const Point2& uk : u) sum = sum + uk;
            const Point2 resid{(sum.x - target.x) / n, (sum.y - target.y) / n};
            for (Point2& uk : u) {
                uk.x -= resid.x;
                uk.y -= resid.y;
            }
            const double viol = std::hypot(resid.x, resid.y);
            if (!clipped && viol < 1e-14 * std::max(1.0, problem.v_max)) break;
        }
    }
};

}  // namespace

OcpSolution plan_ocp(OcpProblem problem, const Trajectory& warm_start) {
    // Auto horizon: warm-start length at 80% of v_max keeps the resampled
    // controls comfortably feasible.
    if (problem.horizon <= 0.0) {
        std::vector<Point2> path = warm_start.points;
        if (warm_start.closed && path.size() > 1 && dist(path.front(), path.back()) > 0.0)
            path.push_back(path.front());
        double total = 0.0;
        for (size_t i = 1; i < path.size(); ++i) total += dist(path[i - 1], path[i]);
        problem.horizon = total > 0.0 ? total / (0.8 * problem.v_max) : 1.0;
    }
    problem.validate();
    if (dist(problem.goal, problem.start) > problem.v_max * problem.horizon * (1.0 + 1e-12))
        throw PlannerError("ocp: endpoints unreachable within v_max * T");
    if (problem.d_avoid <= 0.0) problem.d_avoid = problem.map.detection_radius;

    std::vector<Point2> controls, states;
    resample_warm_start(warm_start, problem, states, controls);

    const Projector project{problem};
    project(controls);
    const double dt = problem.dt();
    states = propagate(problem.start, controls, dt);

    OcpSolution sol;
    sol.horizon = problem.horizon;
    double j = cost(states, controls, problem);
    sol.cost_history.push_back(j);

    double step = 0.0;  // established from the first gradient
    for (int iter = 0; iter < problem.max_iters; ++iter) {
        const std::vector<Point2> grad = cost_gradient(states, controls, problem);
        double gmax = 0.0;
        for (const Point2& g : grad) gmax = std::max(gmax, norm(g));
        if (gmax == 0.0) break;
        if (step <= 0.0) step = 0.1 * problem.v_max / gmax;

        bool accepted = false;
        double alpha = step;
        std::vector<Point2> trial_u, trial_p;
        double trial_j = j;
        for (int ls = 0; ls < 40; ++ls) {
            trial_u = controls;
            for (int k = 0; k < problem.step_count; ++k) {
                trial_u[k].x -= alpha * grad[k].x;
                trial_u[k].y -= alpha * grad[k].y;
            }
            project(trial_u);
            trial_p = propagate(problem.start, trial_u, dt);
            trial_j = cost(trial_p, trial_u, problem);
            if (trial_j < j) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
            if (alpha * gmax < 1e-14 * problem.v_max) break;
        }
        if (!accepted) break;

        controls = std::move(trial_u);
        states = std::move(trial_p);
        const double prev = j;
        j = trial_j;
        sol.cost_history.push_back(j);
        sol.iterations = iter + 1;
        step = alpha * 2.0;

        if (prev - j <= problem.tol * std::max(std::abs(prev), 1e-12)) break;
    }

    sol.states = std::move(states);
    sol.controls = std::move(controls);
    sol.final_terms = cost_terms(sol.states, sol.controls, problem);
    sol.final_cost = sol.final_terms.total;
    sol.cost_history.back() = sol.final_cost;

    // Soft obstacle handling only: flag any residual intrusion.
    int inside = 0;
    for (const Point2& p : sol.states)
        for (const Polygon& obs : problem.map.obstacles)
            if (point_in_polygon(p, obs)) {
                ++inside;
                break;
            }
    if (inside > 0)
        std::fprintf(stderr, "plan_ocp: %d states inside obstacles (soft penalty only)\n",
                     inside);
    return sol;
}

namespace {

std::vector<Point2> free_space_grid(const EnvironmentMap& map, int target_count) {
    const BBox bb = map.bbox();
    const int per_side = std::max(2, static_cast<int>(std::ceil(std::sqrt(
                                         static_cast<double>(std::max(target_count, 4))))));
    std::vector<Point2> samples;
    for (int iy = 0; iy < per_side; ++iy) {
        for (int ix = 0; ix < per_side; ++ix) {
            const Point2 p{bb.min.x + (ix + 0.5) * bb.width() / per_side,
                           bb.min.y + (iy + 0.5) * bb.height() / per_side};
            if (map.free_contains(p)) samples.push_back(p);
        }
    }
    return samples;
}

}  // namespace

OcpProblem make_coverage_problem(const EnvironmentMap& map, const OcpSettings& settings,
                                 const Trajectory& warm_start) {
    map.validate();
    if (warm_start.points.empty()) throw ValidationError("ocp: empty warm start");
    OcpProblem problem;
    problem.map = map;
    problem.step_count = settings.step_count;
    problem.horizon = settings.horizon;
    problem.detection = {settings.gamma, settings.steepness, map.detection_radius};
    problem.v_max = settings.v_max;
    const BBox bb = map.bbox();
    problem.box_min = bb.min;
    problem.box_max = bb.max;
    problem.start = problem.goal = warm_start.points.front();
    problem.lambda_len = settings.lambda_len;
    problem.d_avoid = settings.d_avoid > 0.0 ? settings.d_avoid : map.detection_radius;
    problem.tol = settings.tol;
    problem.max_iters = settings.max_iters;

    problem.omega = free_space_grid(map, settings.omega_samples);
    if (problem.omega.empty()) throw PlannerError("ocp: no free target samples");
    problem.omega_weight.assign(problem.omega.size(), 1.0 / problem.omega.size());

    // Obstacle points: polygon boundaries and interiors sampled at r/2.
    const double spacing = map.detection_radius / 2.0;
    for (const Polygon& obs : map.obstacles) {
        const size_t nv = obs.vertices.size();
        for (size_t i = 0; i < nv; ++i) {
            const Point2 a = obs.vertices[i];
            const Point2 b = obs.vertices[(i + 1) % nv];
            const int steps = std::max(1, static_cast<int>(std::ceil(dist(a, b) / spacing)));
            for (int s = 0; s < steps; ++s)
                problem.obstacle_points.push_back(a + (static_cast<double>(s) / steps) * (b - a));
        }
        const BBox ob = obs.bbox();
        for (double y = ob.min.y + spacing / 2; y < ob.max.y; y += spacing)
            for (double x = ob.min.x + spacing / 2; x < ob.max.x; x += spacing)
                if (point_in_polygon({x, y}, obs)) problem.obstacle_points.push_back({x, y});
    }
    return problem;
}

Trajectory solution_to_trajectory(const OcpSolution& sol) {
    Trajectory traj;
    traj.points = sol.states;
    traj.closed = false;  // endpoints already coincide explicitly
    traj.controls = sol.controls;
    const double dt = sol.horizon / std::max<size_t>(1, sol.controls.size());
    traj.timestamps.resize(sol.states.size());
    for (size_t k = 0; k < sol.states.size(); ++k) traj.timestamps[k] = k * dt;
    return traj;
}

}  // namespace coverplan
