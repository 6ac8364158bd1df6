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
/**
 * @file
 * Scenario templates and scene grids.
 *
 * Every scene is a straight two-lane road along +x. The ego car starts in
 * the right lane at x = 0 heading +x and must reach the far end of the
 * road. Templates:
 *
 *   1  pedestrian crosses from the right sidewalk
 *   2  pedestrian crosses from the left sidewalk
 *   3  as 1, hidden behind a car parked on the right
 *   4  as 2, hidden behind a car parked on the left
 *   5  as 1, with an oncoming car in the left lane
 *   6  as 2, with an oncoming car in the left lane
 *   7  pedestrian crosses diagonally from the right
 *   8  as 3, with an oncoming car in the left lane
 *
 * The crossing point lies `ped_base_offset + distance` metres ahead of the
 * car's start.
 */
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "navq/env/cost_map.hpp"
#include "navq/env/geometry.hpp"

namespace navq::env {

inline constexpr int kNumTemplates = 8;

struct RoadGeometry {
    double road_length = 100.0;
    double lane_width = 3.5;
    double sidewalk_width = 3.0;
    double margin = 10.0;           ///< map padding beyond the road ends (m)
    double outer_band = 3.5;        ///< buildings beyond the sidewalks (m)
    double resolution = 0.5;
    double ped_base_offset = 10.0;
    double parked_gap = 4.0;        ///< parked-car centre before the crossing (m)
    double vehicle_length = 4.5;
    double vehicle_width = 2.0;
    double oncoming_offset = 30.0;  ///< oncoming car start beyond the crossing (m)
    double oncoming_speed = 8.0;
    double diagonal_shift = 8.0;    ///< template 7 goal offset along x (m)

    void validate() const;
    [[nodiscard]] double sidewalk_center() const { return lane_width + sidewalk_width / 2; }
};

struct OtherCar {
    Pose pose;
    double speed = 0.0;
    bool operator==(const OtherCar &) const = default;
};

struct PedestrianSpawn {
    Vec2 start;
    Vec2 goal;
    double speed = 0.0;
    bool operator==(const PedestrianSpawn &) const = default;
};

struct Scene {
    int id = 0;
    int scenario_id = 1;
    Pose car_start;
    Vec2 car_goal;
    double ped_distance = 0.0;
    double ped_speed = 0.0;
    std::vector<OrientedRect> static_obstacles;
    std::vector<OtherCar> other_cars;
    std::vector<PedestrianSpawn> pedestrians;
};

enum class Split { Train, Test };

struct SceneGridConfig {
    std::vector<int> scenarios;
    double speed_min = 0.0;
    double speed_max = 0.0;
    double speed_step = 0.1;
    double distance_min = 0.0;
    double distance_max = 0.0;
    double distance_step = 1.0;
    RoadGeometry geometry;

    static SceneGridConfig defaults(Split split);
    void validate() const;
};

/// Evenly spaced values min, min + step, ... <= max (rounded to 1e-9).
std::vector<double> grid_values(double min, double max, double step);

/// Instantiates one template; ids outside 1..8 are ConfigError.
Scene make_scene(int scenario_id, double distance, double speed, const RoadGeometry &geo = {});

/// Ordered by scenario, then speed, then distance.
std::vector<Scene> generate_scenes(const SceneGridConfig &grid);
std::vector<Scene> generate_scenes(Split split);

/// Road, sidewalks, buildings, and static obstacles of `scene`.
CostMap build_cost_map(const Scene &scene, const RoadGeometry &geo = {});

nlohmann::json to_json(const Scene &scene);
Scene scene_from_json(const nlohmann::json &j);
void write_jsonl(std::ostream &out, const std::vector<Scene> &scenes);
std::vector<Scene> read_jsonl(std::istream &in);

} // namespace navq::env
