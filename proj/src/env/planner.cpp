// Copyright 2026 The navq Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "navq/env/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <queue>
#include <unordered_map>

#include "navq/error.hpp"

namespace navq::env {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

struct Node {
    Pose pose;
    double g = 0.0;
    int parent = -1;
    double steer = 0.0;
    bool goal = false;
};

struct QueueEntry {
    double f;
    double g;
    int node;
    bool operator<(const QueueEntry &o) const {
        // Max-heap by default: invert so the smallest f pops first, and
        // prefer the deeper node on ties.
        if (f != o.f) {
            return f > o.f;
        }
        if (g != o.g) {
            return g < o.g;
        }
        return node > o.node;
    }
};

// Cost of one primitive and the pose it ends in; cost < 0 when it enters a
// lethal cell (only if `reject_lethal`).
struct Edge {
    Pose end;
    double cost;
};

Edge simulate_edge(const CostMap &map, const Pose &from, double alpha, const PlannerConfig &cfg,
                   bool reject_lethal) {
    const double ds = cfg.step_length / cfg.substeps;
    Pose p = from;
    double cost = 0.0;
    for (int s = 0; s < cfg.substeps; ++s) {
        p = bicycle_advance(p, ds, alpha, cfg.wheelbase);
        const int c = map.footprint_cost(footprint(p, cfg.footprint_length, cfg.footprint_width));
        if (reject_lethal && c >= cfg.lethal_cost) {
            return {p, -1.0};
        }
        cost += ds * c;
    }
    if (alpha != 0.0) {
        cost += cfg.steer_penalty;
    }
    return {p, cost};
}

std::int64_t state_key(const Pose &p, const PlannerConfig &cfg) {
    const auto ix = static_cast<std::int64_t>(std::floor(p.x / cfg.xy_resolution));
    const auto iy = static_cast<std::int64_t>(std::floor(p.y / cfg.xy_resolution));
    const auto ih = static_cast<std::int64_t>(
        std::floor(wrap_two_pi(p.heading) / (2 * std::numbers::pi) * cfg.heading_bins)) %
        cfg.heading_bins;
    return ((ix & 0x1FFFFF) << 42) | ((iy & 0x1FFFFF) << 21) | (ih & 0x1FFFFF);
}

} // namespace

double steering_bin_rad(int bin) {
    require(bin >= 0 && bin < kNumSteeringBins, "steering bin out of range");
    return kSteeringBinsDeg[bin] * kDegToRad;
}

void PlannerConfig::validate() const {
    require(step_length > 0.0, "planner step_length must be positive");
    require(substeps >= 1, "planner substeps must be >= 1");
    require(heading_bins >= 4, "planner heading_bins must be >= 4");
    require(xy_resolution > 0.0, "planner xy_resolution must be positive");
    require(wheelbase > 0.0, "wheelbase must be positive");
    require(footprint_length >= 0.0 && footprint_width >= 0.0, "footprint must be >= 0");
    require(goal_tolerance > 0.0, "goal_tolerance must be positive");
    require(heuristic_weight >= 1.0, "heuristic_weight must be >= 1");
    require(steer_penalty >= 0.0, "steer_penalty must be >= 0");
    require(max_expansions > 0, "max_expansions must be positive");
    require(lookahead_min > 0.0 && lookahead_time >= 0.0, "bad pure-pursuit lookahead");
}

OrientedRect footprint(const Pose &pose, double length, double width) {
    return {pose.position(), pose.heading, length, width};
}

Pose bicycle_advance(const Pose &pose, double ds, double alpha, double wheelbase) {
    Pose out;
    out.x = pose.x + ds * std::cos(pose.heading);
    out.y = pose.y + ds * std::sin(pose.heading);
    out.heading = wrap_two_pi(pose.heading + ds / wheelbase * std::tan(alpha));
    return out;
}

PlannedPath plan_path(const CostMap &map, const Pose &start, Vec2 goal, const PlannerConfig &cfg) {
    cfg.validate();
    require<PlanningError>(map.contains_point(start.position()), "planner: start outside map");
    require<PlanningError>(map.contains_point(goal), "planner: goal outside map");
    if ((start.position() - goal).norm() <= cfg.goal_tolerance) {
        return {};
    }
    require<PlanningError>(
        map.footprint_cost(footprint(start, cfg.footprint_length, cfg.footprint_width)) <
            cfg.lethal_cost,
        "planner: start pose is in collision");

    const double hscale = cfg.heuristic_weight * std::max(map.min_cost(), 0);
    auto heuristic = [&](const Pose &p) {
        return hscale * std::max((p.position() - goal).norm() - cfg.goal_tolerance, 0.0);
    };

    std::vector<Node> nodes;
    nodes.push_back({start, 0.0, -1, 0.0, false});
    std::unordered_map<std::int64_t, double> best;
    best[state_key(start, cfg)] = 0.0;
    std::priority_queue<QueueEntry> open;
    open.push({heuristic(start), 0.0, 0});

    int expansions = 0;
    while (!open.empty()) {
        const QueueEntry top = open.top();
        open.pop();
        const Node cur = nodes[static_cast<std::size_t>(top.node)];
        if (cur.goal) {
            PlannedPath path;
            path.cost = cur.g;
            for (int i = top.node; i >= 0; i = nodes[static_cast<std::size_t>(i)].parent) {
                path.poses.push_back(nodes[static_cast<std::size_t>(i)].pose);
                if (nodes[static_cast<std::size_t>(i)].parent >= 0) {
                    path.steering.push_back(nodes[static_cast<std::size_t>(i)].steer);
                }
            }
            std::reverse(path.poses.begin(), path.poses.end());
            std::reverse(path.steering.begin(), path.steering.end());
            return path;
        }
        const auto key = state_key(cur.pose, cfg);
        if (auto it = best.find(key); it != best.end() && it->second < cur.g) {
            continue;
        }
        if (++expansions > cfg.max_expansions) {
            break;
        }
        for (int b = 0; b < kNumSteeringBins; ++b) {
            const double alpha = steering_bin_rad(b);
            const Edge e = simulate_edge(map, cur.pose, alpha, cfg, true);
            if (e.cost < 0.0 || !map.contains_point(e.end.position())) {
                continue;
            }
            const double g = cur.g + e.cost;
            const bool at_goal = (e.end.position() - goal).norm() <= cfg.goal_tolerance;
            if (!at_goal) {
                const auto k = state_key(e.end, cfg);
                auto it = best.find(k);
                if (it != best.end() && it->second <= g) {
                    continue;
                }
                best[k] = g;
            }
            nodes.push_back({e.end, g, top.node, alpha, at_goal});
            open.push({g + (at_goal ? 0.0 : heuristic(e.end)), g,
                       static_cast<int>(nodes.size()) - 1});
        }
    }
    throw PlanningError("planner: goal unreachable");
}

double path_cost(const CostMap &map, const std::vector<Pose> &poses,
                 const std::vector<double> &steering, const PlannerConfig &cfg) {
    require<InputError>(poses.empty() || steering.size() + 1 == poses.size(),
                        "path_cost: steering must have one entry per segment");
    double total = 0.0;
    for (std::size_t i = 0; i < steering.size(); ++i) {
        total += simulate_edge(map, poses[i], steering[i], cfg, false).cost;
    }
    return total;
}

double track_steering(const PlannedPath &path, const Pose &car, double speed,
                      const PlannerConfig &cfg) {
    if (path.empty()) {
        return 0.0;
    }
    const Vec2 p = car.position();
    std::size_t nearest = 0;
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < path.poses.size(); ++i) {
        const double d = (path.poses[i].position() - p).norm();
        if (d < dmin) {
            dmin = d;
            nearest = i;
        }
    }
    const double lookahead = std::max(cfg.lookahead_min, speed * cfg.lookahead_time);
    std::size_t target = path.poses.size() - 1;
    for (std::size_t i = nearest; i < path.poses.size(); ++i) {
        if ((path.poses[i].position() - p).norm() >= lookahead) {
            target = i;
            break;
        }
    }
    const Vec2 d = path.poses[target].position() - p;
    const double ld = d.norm();
    if (ld < 1e-9) {
        return 0.0;
    }
    const double eta = wrap_pi(std::atan2(d.y, d.x) - car.heading);
    const double wanted = std::atan(2.0 * cfg.wheelbase * std::sin(eta) / ld);
    double best = 0.0;
    double best_err = std::numeric_limits<double>::infinity();
    for (int b = 0; b < kNumSteeringBins; ++b) {
        const double a = steering_bin_rad(b);
        const double err = std::abs(a - wanted);
        if (err < best_err - 1e-12 || (std::abs(err - best_err) <= 1e-12 && std::abs(a) < std::abs(best))) {
            best = a;
            best_err = err;
        }
    }
    return best;
}

double cross_track_error(const PlannedPath &path, Vec2 p) {
    if (path.poses.size() < 2) {
        return 0.0;
    }
    double best = std::numeric_limits<double>::infinity();
    double signed_best = 0.0;
    for (std::size_t i = 0; i + 1 < path.poses.size(); ++i) {
        const Vec2 a = path.poses[i].position();
        const Vec2 b = path.poses[i + 1].position();
        const Vec2 ab = b - a;
        const double len2 = ab.dot(ab);
        const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
        const double d = (p - (a + ab * t)).norm();
        if (d < best) {
            best = d;
            signed_best = ab.cross(p - a) >= 0.0 ? d : -d;
        }
    }
    return signed_best;
}

} // namespace navq::env
