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
#include "navq/env/world.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "navq/error.hpp"

namespace navq::env {

using nlohmann::json;

namespace {

void append_key(std::string &key, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g,", v);
    key += buf;
}

std::string static_key(const Scene &scene) {
    std::string key;
    for (double v : {scene.car_start.x, scene.car_start.y, scene.car_start.heading,
                     scene.car_goal.x, scene.car_goal.y}) {
        append_key(key, v);
    }
    for (const auto &o : scene.static_obstacles) {
        for (double v : {o.center.x, o.center.y, o.heading, o.length, o.width}) {
            append_key(key, v);
        }
    }
    return key;
}

OrientedRect other_car_rect(const OtherCar &c, const EnvConfig &cfg) {
    return {c.pose.position(), c.pose.heading, cfg.geometry.vehicle_length,
            cfg.geometry.vehicle_width};
}

bool at_goal(const CarState &car, const EnvConfig &cfg) {
    return (car.p - car.goal).norm() <= cfg.goal_tolerance;
}

bool hits_static(const WorldState &s, const EnvConfig &cfg) {
    return s.map && s.map->footprint_cost(car_rect(s.car, cfg)) >= kCollisionCost;
}

bool hits_other_car(const WorldState &s, const EnvConfig &cfg) {
    const auto rect = car_rect(s.car, cfg);
    return std::any_of(s.cars.begin(), s.cars.end(),
                       [&](const OtherCar &c) { return overlaps(rect, other_car_rect(c, cfg)); });
}

} // namespace

const char *to_string(Acc a) {
    switch (a) {
    case Acc::Accelerate:
        return "accelerate";
    case Acc::Maintain:
        return "maintain";
    case Acc::Decelerate:
        return "decelerate";
    }
    return "?";
}

const char *to_string(Outcome o) {
    switch (o) {
    case Outcome::Running:
        return "running";
    case Outcome::Goal:
        return "goal";
    case Outcome::Collision:
        return "collision";
    case Outcome::Timeout:
        return "timeout";
    }
    return "?";
}

void EnvConfig::validate() const {
    require(dt > 0.0, "dt must be positive");
    require(wheelbase > 0.0, "wheelbase must be positive");
    require(car_length > 0.0 && car_width > 0.0, "car size must be positive");
    require(ped_radius > 0.0, "ped_radius must be positive");
    require(near_miss_margin >= 0.0 && hit_area_margin >= 0.0, "margins must be >= 0");
    require(speed_step_kmh > 0.0, "speed_step_kmh must be positive");
    require(max_speed_kmh > 0.0, "max_speed_kmh must be positive");
    require(max_steps > 0, "max_steps must be positive");
    require(sensing_radius > 0.0, "sensing_radius must be positive");
    require(k_nearest >= 1, "k_nearest must be >= 1");
    require(goal_tolerance > 0.0, "goal_tolerance must be positive");
    require(impact_ref_kmh > 0.0, "impact_ref_kmh must be positive");
    geometry.validate();
    planner.validate();
}

Vec2 PedestrianState::velocity() const {
    if ((goal - p).norm() <= 0.0) {
        return {};
    }
    return Vec2{std::cos(heading), std::sin(heading)} * speed;
}

OrientedRect car_rect(const CarState &car, const EnvConfig &cfg) {
    return {car.p, car.heading, cfg.car_length, cfg.car_width};
}

std::vector<Proximity> check_proximity(const WorldState &s, const EnvConfig &cfg) {
    const auto rect = car_rect(s.car, cfg);
    std::vector<Proximity> out;
    out.reserve(s.peds.size());
    for (const auto &ped : s.peds) {
        const double d = distance_to_rect(ped.p, rect);
        if (d <= cfg.ped_radius) {
            out.push_back(Proximity::Hit);
        } else if (s.car.v > 0.0 && d <= cfg.ped_radius + cfg.near_miss_margin) {
            out.push_back(Proximity::NearMiss);
        } else {
            out.push_back(Proximity::Clear);
        }
    }
    return out;
}

RewardBreakdown compute_reward(const WorldState &s, const Action &action, const EnvConfig &cfg) {
    RewardBreakdown r;
    const auto prox = check_proximity(s, cfg);
    const bool ped_hit = std::any_of(prox.begin(), prox.end(),
                                     [](Proximity p) { return p == Proximity::Hit; });
    const bool near = std::any_of(prox.begin(), prox.end(),
                                  [](Proximity p) { return p == Proximity::NearMiss; });
    const bool collided = ped_hit || hits_static(s, cfg) || hits_other_car(s, cfg);
    const double v_kmh = s.car.v / kKmhToMs;
    const double dist = (s.car.p - s.car.goal).norm();

    if (at_goal(s.car, cfg)) {
        r.goal = cfg.goal_reward;
    } else {
        r.not_goal = -dist * cfg.not_goal_scale;
    }
    if (collided) {
        r.hit = -cfg.hit_penalty * (v_kmh / cfg.impact_ref_kmh);
    }
    if (s.car.v != 0.0) {
        const auto area = car_rect(s.car, cfg).inflated(cfg.hit_area_margin);
        bool inside = std::any_of(s.peds.begin(), s.peds.end(), [&](const PedestrianState &p) {
            return distance_to_rect(p.p, area) <= cfg.ped_radius;
        });
        inside = inside || std::any_of(s.cars.begin(), s.cars.end(), [&](const OtherCar &c) {
                     return overlaps(area, other_car_rect(c, cfg));
                 });
        if (inside && s.map) {
            r.obstacle = -static_cast<double>(s.map->footprint_cost(car_rect(s.car, cfg)));
        }
    }
    if (near) {
        r.near_miss = -cfg.near_miss_penalty;
    }
    if (v_kmh > cfg.speed_limit_kmh) {
        r.over_speeding = -cfg.over_speed_penalty;
    }
    if (action.acc == Acc::Decelerate && s.prev_speed == 0.0) {
        r.braking = -cfg.braking_penalty;
    }
    if (action.steering != 0.0) {
        r.steer = -cfg.steer_penalty;
    }
    return r;
}

bool pedestrian_visible(const WorldState &s, const PedestrianState &ped, const EnvConfig &cfg) {
    if ((ped.p - s.car.p).norm() > cfg.sensing_radius) {
        return false;
    }
    return std::none_of(s.obstacles.begin(), s.obstacles.end(), [&](const OrientedRect &o) {
        return segment_intersects(s.car.p, ped.p, o);
    });
}

Observation observe(const WorldState &s, const EnvConfig &cfg) {
    Observation obs;
    obs.goal_rel = s.car.goal - s.car.p;
    obs.cross_track = s.path ? cross_track_error(*s.path, s.car.p) : 0.0;
    obs.speed = s.car.v;
    if (s.prev_acc) {
        obs.prev_acc[static_cast<std::size_t>(*s.prev_acc)] = 1.0;
    }
    obs.prev_reward = s.prev_reward;

    const Vec2 car_vel = Vec2{std::cos(s.car.heading), std::sin(s.car.heading)} * s.car.v;
    std::vector<std::pair<double, std::size_t>> seen;
    for (std::size_t i = 0; i < s.peds.size(); ++i) {
        if (pedestrian_visible(s, s.peds[i], cfg)) {
            seen.emplace_back((s.peds[i].p - s.car.p).norm(), i);
        }
    }
    std::stable_sort(seen.begin(), seen.end(),
                     [](const auto &a, const auto &b) { return a.first < b.first; });
    obs.peds.assign(static_cast<std::size_t>(cfg.k_nearest), PedestrianObs{});
    for (std::size_t slot = 0; slot < obs.peds.size() && slot < seen.size(); ++slot) {
        const auto &ped = s.peds[seen[slot].second];
        obs.peds[slot] = {ped.p - s.car.p, ped.velocity() - car_vel, true};
    }
    return obs;
}

std::vector<double> Observation::flatten() const {
    std::vector<double> f{goal_rel.x, goal_rel.y, cross_track, speed,
                          prev_acc[0], prev_acc[1], prev_acc[2], prev_reward};
    for (const auto &p : peds) {
        f.insert(f.end(), {p.rel_pos.x, p.rel_pos.y, p.rel_vel.x, p.rel_vel.y,
                           p.visible ? 1.0 : 0.0});
    }
    return f;
}

json to_json(const Observation &obs) {
    json peds = json::array();
    for (const auto &p : obs.peds) {
        peds.push_back({{"rel_pos", {p.rel_pos.x, p.rel_pos.y}},
                        {"rel_vel", {p.rel_vel.x, p.rel_vel.y}},
                        {"visible", p.visible}});
    }
    return {{"goal_rel", {obs.goal_rel.x, obs.goal_rel.y}},
            {"cross_track", obs.cross_track},
            {"speed", obs.speed},
            {"prev_acc", obs.prev_acc},
            {"prev_reward", obs.prev_reward},
            {"pedestrians", peds}};
}

json to_json(const RewardBreakdown &r) {
    return {{"goal", r.goal},          {"hit", r.hit},
            {"obstacle", r.obstacle},  {"near_miss", r.near_miss},
            {"over_speeding", r.over_speeding}, {"not_goal", r.not_goal},
            {"braking", r.braking},    {"steer", r.steer},
            {"total", r.total()}};
}

Environment::Environment(EnvConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.planner.wheelbase = cfg_.wheelbase;
    cfg_.planner.footprint_length = cfg_.car_length;
    cfg_.planner.footprint_width = cfg_.car_width;
    cfg_.validate();
}

Observation Environment::reset(const Scene &scene) {
    const std::string key = static_key(scene);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
        auto map = std::make_shared<const CostMap>(build_cost_map(scene, cfg_.geometry));
        std::shared_ptr<const PlannedPath> path;
        try {
            path = std::make_shared<const PlannedPath>(
                plan_path(*map, scene.car_start, scene.car_goal, cfg_.planner));
        } catch (const PlanningError &e) {
            throw SceneError("scene " + std::to_string(scene.id) + ": " + e.what());
        }
        it = cache_.emplace(key, std::make_pair(std::move(map), std::move(path))).first;
    }

    state_ = WorldState{};
    state_.map = it->second.first;
    state_.path = it->second.second;
    state_.car.p = scene.car_start.position();
    state_.car.heading = wrap_two_pi(scene.car_start.heading);
    state_.car.goal = scene.car_goal;
    state_.obstacles = scene.static_obstacles;
    state_.cars = scene.other_cars;
    for (const auto &spawn : scene.pedestrians) {
        PedestrianState p;
        p.p = spawn.start;
        p.goal = spawn.goal;
        p.speed = spawn.speed;
        const Vec2 d = spawn.goal - spawn.start;
        p.heading = wrap_two_pi(std::atan2(d.y, d.x));
        state_.peds.push_back(p);
    }
    started_ = true;
    return observe(state_, cfg_);
}

double Environment::planner_steering() const {
    require<UsageError>(started_, "planner_steering before reset");
    return track_steering(*state_.path, state_.car.pose(), state_.car.v, cfg_.planner);
}

StepResult Environment::step(const Action &action) {
    require<UsageError>(started_, "step before reset");
    require<UsageError>(!state_.done, "step on a finished episode");
    WorldState &s = state_;

    s.prev_speed = s.car.v;
    const double dv = cfg_.speed_step_kmh * kKmhToMs;
    if (action.acc == Acc::Accelerate) {
        s.car.v += dv;
    } else if (action.acc == Acc::Decelerate) {
        s.car.v -= dv;
    }
    s.car.v = std::clamp(s.car.v, 0.0, cfg_.max_speed_kmh * kKmhToMs);

    const double th = s.car.heading;
    s.car.p.x += s.car.v * std::cos(th) * cfg_.dt;
    s.car.p.y += s.car.v * std::sin(th) * cfg_.dt;
    s.car.heading = wrap_two_pi(th + s.car.v / cfg_.wheelbase * std::tan(action.steering) * cfg_.dt);

    for (auto &c : s.cars) {
        c.pose.x += c.speed * std::cos(c.pose.heading) * cfg_.dt;
        c.pose.y += c.speed * std::sin(c.pose.heading) * cfg_.dt;
    }

    const auto rect = car_rect(s.car, cfg_);
    for (auto &p : s.peds) {
        const Vec2 d = p.goal - p.p;
        const double remaining = d.norm();
        if (remaining <= 0.0) {
            continue;
        }
        const double move = std::min(p.speed * cfg_.dt, remaining);
        const Vec2 next = p.p + d * (move / remaining);
        if (s.car.v == 0.0 && distance_to_rect(next, rect) <= cfg_.ped_radius) {
            continue;
        }
        p.p = move == remaining ? p.goal : next;
    }

    StepResult out;
    out.proximity = check_proximity(s, cfg_);
    out.reward = compute_reward(s, action, cfg_);
    ++s.step;

    const bool ped_hit = std::any_of(out.proximity.begin(), out.proximity.end(),
                                     [](Proximity p) { return p == Proximity::Hit; });
    if (ped_hit || hits_static(s, cfg_) || hits_other_car(s, cfg_)) {
        s.outcome = Outcome::Collision;
    } else if (at_goal(s.car, cfg_)) {
        s.outcome = Outcome::Goal;
    } else if (s.step >= cfg_.max_steps) {
        s.outcome = Outcome::Timeout;
    }
    s.done = s.outcome != Outcome::Running;
    s.prev_acc = action.acc;
    s.prev_reward = out.reward.total();

    out.obs = observe(s, cfg_);
    out.done = s.done;
    out.outcome = s.outcome;
    return out;
}

} // namespace navq::env
