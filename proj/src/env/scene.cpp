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
#include "navq/env/scene.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "navq/error.hpp"

namespace navq::env {

using nlohmann::json;

namespace {

json pose_json(const Pose &p) { return {{"x", p.x}, {"y", p.y}, {"heading", p.heading}}; }
json vec_json(Vec2 v) { return {{"x", v.x}, {"y", v.y}}; }

Pose pose_from(const json &j) {
    return {j.at("x").get<double>(), j.at("y").get<double>(), j.at("heading").get<double>()};
}
Vec2 vec_from(const json &j) { return {j.at("x").get<double>(), j.at("y").get<double>()}; }

} // namespace

void RoadGeometry::validate() const {
    require(road_length > 0.0, "road_length must be positive");
    require(lane_width > 0.0 && sidewalk_width > 0.0, "lane and sidewalk widths must be positive");
    require(margin >= 0.0 && outer_band >= 0.0, "map padding must be >= 0");
    require(resolution > 0.0, "map resolution must be positive");
    require(vehicle_length > 0.0 && vehicle_width > 0.0, "vehicle size must be positive");
    require(oncoming_speed >= 0.0, "oncoming_speed must be >= 0");
}

SceneGridConfig SceneGridConfig::defaults(Split split) {
    SceneGridConfig g;
    if (split == Split::Train) {
        g.scenarios = {1, 3, 4, 5, 6, 8};
        g.speed_min = 0.6;
        g.speed_max = 2.0;
        g.distance_min = 0.0;
        g.distance_max = 40.0;
    } else {
        g.scenarios = {1, 2, 3, 4, 5, 6, 7, 8};
        g.speed_min = 0.25;
        g.speed_max = 2.85;
        g.distance_min = 4.75;
        g.distance_max = 49.25;
    }
    g.speed_step = 0.1;
    g.distance_step = 1.0;
    return g;
}

void SceneGridConfig::validate() const {
    require(!scenarios.empty(), "scene grid: no scenarios selected");
    for (int s : scenarios) {
        require(s >= 1 && s <= kNumTemplates,
                "scene grid: scenario " + std::to_string(s) + " has no template (supported: 1-8)");
    }
    require(speed_step > 0.0 && distance_step > 0.0, "scene grid: steps must be positive");
    require(speed_min > 0.0 && speed_max >= speed_min, "scene grid: bad speed range");
    require(distance_min >= 0.0 && distance_max >= distance_min,
            "scene grid: bad distance range");
    geometry.validate();
}

std::vector<double> grid_values(double min, double max, double step) {
    require(step > 0.0 && max >= min, "grid_values: empty range");
    const auto n = static_cast<int>(std::floor((max - min) / step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out.push_back(std::round((min + i * step) * 1e9) / 1e9);
    }
    return out;
}

Scene make_scene(int scenario_id, double distance, double speed, const RoadGeometry &geo) {
    geo.validate();
    require(scenario_id >= 1 && scenario_id <= kNumTemplates,
            "scenario " + std::to_string(scenario_id) + " has no template (supported: 1-8)");
    require(speed > 0.0, "pedestrian speed must be positive");
    require(distance >= 0.0, "pedestrian distance must be >= 0");

    Scene s;
    s.scenario_id = scenario_id;
    s.ped_distance = distance;
    s.ped_speed = speed;
    const double lane_center = geo.lane_width / 2;
    s.car_start = {0.0, -lane_center, 0.0};
    s.car_goal = {geo.road_length, -lane_center};

    const bool from_left = scenario_id == 2 || scenario_id == 4 || scenario_id == 6;
    const double side = from_left ? 1.0 : -1.0;
    const double xc = geo.ped_base_offset + distance;
    const double sy = geo.sidewalk_center();
    PedestrianSpawn ped{{xc, side * sy}, {xc, -side * sy}, speed};
    if (scenario_id == 7) {
        ped.goal.x += geo.diagonal_shift;
    }
    s.pedestrians.push_back(ped);

    const bool parked = scenario_id == 3 || scenario_id == 4 || scenario_id == 8;
    if (parked) {
        // Parked along the kerb on the pedestrian's side, just before the
        // crossing point.
        const double cy = side * (geo.lane_width + geo.vehicle_width / 2);
        s.static_obstacles.push_back(
            {{xc - geo.parked_gap, cy}, 0.0, geo.vehicle_length, geo.vehicle_width});
    }
    const bool oncoming = scenario_id == 5 || scenario_id == 6 || scenario_id == 8;
    if (oncoming) {
        s.other_cars.push_back(
            {{xc + geo.oncoming_offset, lane_center, std::numbers::pi}, geo.oncoming_speed});
    }
    return s;
}

std::vector<Scene> generate_scenes(const SceneGridConfig &grid) {
    grid.validate();
    const auto speeds = grid_values(grid.speed_min, grid.speed_max, grid.speed_step);
    const auto dists = grid_values(grid.distance_min, grid.distance_max, grid.distance_step);
    std::vector<Scene> out;
    out.reserve(grid.scenarios.size() * speeds.size() * dists.size());
    for (int sc : grid.scenarios) {
        for (double v : speeds) {
            for (double d : dists) {
                Scene s = make_scene(sc, d, v, grid.geometry);
                s.id = static_cast<int>(out.size());
                out.push_back(std::move(s));
            }
        }
    }
    return out;
}

std::vector<Scene> generate_scenes(Split split) {
    return generate_scenes(SceneGridConfig::defaults(split));
}

CostMap build_cost_map(const Scene &scene, const RoadGeometry &geo) {
    geo.validate();
    const double half = geo.lane_width + geo.sidewalk_width + geo.outer_band;
    const double xmin = -geo.margin;
    const double xmax = geo.road_length + geo.margin;
    const int cols = static_cast<int>(std::ceil((xmax - xmin) / geo.resolution));
    const int rows = static_cast<int>(std::ceil(2 * half / geo.resolution));
    CostMap map(cols, rows, geo.resolution, {xmin, -half}, kRoadCost);
    const double walk = geo.lane_width + geo.sidewalk_width;
    map.paint_band(-half, -walk, kCollisionCost);
    map.paint_band(-walk, -geo.lane_width, kSidewalkCost);
    map.paint_band(geo.lane_width, walk, kSidewalkCost);
    map.paint_band(walk, half + geo.resolution, kCollisionCost);
    for (const auto &o : scene.static_obstacles) {
        map.paint(o, kCollisionCost);
    }
    return map;
}

json to_json(const Scene &s) {
    json obstacles = json::array();
    for (const auto &o : s.static_obstacles) {
        obstacles.push_back({{"center", vec_json(o.center)},
                             {"heading", o.heading},
                             {"length", o.length},
                             {"width", o.width}});
    }
    json cars = json::array();
    for (const auto &c : s.other_cars) {
        cars.push_back({{"pose", pose_json(c.pose)}, {"speed", c.speed}});
    }
    json peds = json::array();
    for (const auto &p : s.pedestrians) {
        peds.push_back({{"start", vec_json(p.start)}, {"goal", vec_json(p.goal)}, {"speed", p.speed}});
    }
    return {{"id", s.id},
            {"scenario_id", s.scenario_id},
            {"car_start", pose_json(s.car_start)},
            {"car_goal", vec_json(s.car_goal)},
            {"ped_distance", s.ped_distance},
            {"ped_speed", s.ped_speed},
            {"static_obstacles", obstacles},
            {"other_cars", cars},
            {"pedestrians", peds}};
}

Scene scene_from_json(const json &j) {
    try {
        Scene s;
        s.id = j.at("id").get<int>();
        s.scenario_id = j.at("scenario_id").get<int>();
        s.car_start = pose_from(j.at("car_start"));
        s.car_goal = vec_from(j.at("car_goal"));
        s.ped_distance = j.at("ped_distance").get<double>();
        s.ped_speed = j.at("ped_speed").get<double>();
        for (const auto &o : j.at("static_obstacles")) {
            s.static_obstacles.push_back({vec_from(o.at("center")), o.at("heading").get<double>(),
                                          o.at("length").get<double>(),
                                          o.at("width").get<double>()});
        }
        for (const auto &c : j.at("other_cars")) {
            s.other_cars.push_back({pose_from(c.at("pose")), c.at("speed").get<double>()});
        }
        for (const auto &p : j.at("pedestrians")) {
            s.pedestrians.push_back(
                {vec_from(p.at("start")), vec_from(p.at("goal")), p.at("speed").get<double>()});
        }
        return s;
    } catch (const json::exception &e) {
        throw InputError(std::string("malformed scene: ") + e.what());
    }
}

void write_jsonl(std::ostream &out, const std::vector<Scene> &scenes) {
    for (const auto &s : scenes) {
        out << to_json(s).dump() << '\n';
    }
}

std::vector<Scene> read_jsonl(std::istream &in) {
    std::vector<Scene> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception &e) {
            throw InputError(std::string("malformed scene line: ") + e.what());
        }
        out.push_back(scene_from_json(j));
    }
    return out;
}

} // namespace navq::env
