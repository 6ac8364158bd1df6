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
 * Driving world: bicycle-model ego car, straight-line pedestrians, other
 * cars on fixed tracks, occlusion-aware observations, and the reward.
 *
 * Pedestrians never step into a stationary car, so every hit is caused by
 * the ego car's own motion.
 */
#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "navq/env/cost_map.hpp"
#include "navq/env/geometry.hpp"
#include "navq/env/planner.hpp"
#include "navq/env/scene.hpp"

namespace navq::env {

inline constexpr double kKmhToMs = 1.0 / 3.6;

enum class Acc { Accelerate = 0, Maintain = 1, Decelerate = 2 };
inline constexpr int kNumAcc = 3;

struct Action {
    Acc acc = Acc::Maintain;
    double steering = 0.0; ///< radians, one of the steering bins
};

enum class Proximity { Clear, NearMiss, Hit };
enum class Outcome { Running, Goal, Collision, Timeout };

const char *to_string(Acc a);
const char *to_string(Outcome o);

struct EnvConfig {
    double dt = 0.1;
    double wheelbase = 2.5;
    double car_length = 4.5;
    double car_width = 2.0;
    double ped_radius = 0.3;
    double near_miss_margin = 1.5;
    double hit_area_margin = 0.5;   ///< obstacle term: car rectangle inflation (m)
    double speed_step_kmh = 5.0;
    double speed_limit_kmh = 50.0;
    double max_speed_kmh = 60.0;    ///< hard clamp
    int max_steps = 500;
    double sensing_radius = 50.0;
    int k_nearest = 4;
    double goal_tolerance = 2.0;

    double goal_reward = 200.0;
    double hit_penalty = 100.0;
    double impact_ref_kmh = 50.0;   ///< impact speed giving the full hit penalty
    double near_miss_penalty = 10.0;
    double over_speed_penalty = 10.0;
    double not_goal_scale = 1.0 / 1000.0;
    double braking_penalty = 1.0;
    double steer_penalty = 1.0;

    RoadGeometry geometry;
    PlannerConfig planner;

    void validate() const;
};

struct CarState {
    Vec2 p;
    Vec2 goal;
    double v = 0.0;
    double heading = 0.0;
    [[nodiscard]] Pose pose() const { return {p.x, p.y, heading}; }
};

struct PedestrianState {
    Vec2 p;
    Vec2 goal;
    double speed = 0.0;
    double heading = 0.0;
    [[nodiscard]] Vec2 velocity() const;
};

struct RewardBreakdown {
    double goal = 0.0;
    double hit = 0.0;
    double obstacle = 0.0;
    double near_miss = 0.0;
    double over_speeding = 0.0;
    double not_goal = 0.0;
    double braking = 0.0;
    double steer = 0.0;
    [[nodiscard]] double total() const {
        return goal + hit + obstacle + near_miss + over_speeding + not_goal + braking + steer;
    }
};

struct WorldState {
    CarState car;
    double prev_speed = 0.0; ///< speed before the last action
    std::vector<PedestrianState> peds;
    std::vector<OtherCar> cars;
    std::vector<OrientedRect> obstacles;
    int step = 0;
    bool done = false;
    Outcome outcome = Outcome::Running;
    std::optional<Acc> prev_acc;
    double prev_reward = 0.0;
    std::shared_ptr<const CostMap> map;
    std::shared_ptr<const PlannedPath> path;
};

struct PedestrianObs {
    Vec2 rel_pos;
    Vec2 rel_vel;
    bool visible = false;
};

struct Observation {
    Vec2 goal_rel;
    double cross_track = 0.0;
    double speed = 0.0;
    std::array<double, kNumAcc> prev_acc{};
    double prev_reward = 0.0;
    std::vector<PedestrianObs> peds; ///< k_nearest slots, nearest first

    [[nodiscard]] std::vector<double> flatten() const;
    [[nodiscard]] static std::size_t flat_size(int k_nearest) {
        return 8 + 5 * static_cast<std::size_t>(k_nearest);
    }
};

nlohmann::json to_json(const Observation &obs);
nlohmann::json to_json(const RewardBreakdown &r);

struct StepResult {
    Observation obs;
    RewardBreakdown reward;
    bool done = false;
    Outcome outcome = Outcome::Running;
    std::vector<Proximity> proximity;
};

OrientedRect car_rect(const CarState &car, const EnvConfig &cfg);

/// Per pedestrian; NearMiss requires the car to be moving.
std::vector<Proximity> check_proximity(const WorldState &s, const EnvConfig &cfg);

/// Reward of arriving in `s` (the post-transition state) after `action`.
RewardBreakdown compute_reward(const WorldState &s, const Action &action, const EnvConfig &cfg);

/// Sensing radius and line of sight against static obstacles.
bool pedestrian_visible(const WorldState &s, const PedestrianState &ped, const EnvConfig &cfg);

Observation observe(const WorldState &s, const EnvConfig &cfg);

class Environment {
  public:
    explicit Environment(EnvConfig cfg = {});

    /// Throws SceneError if the planner cannot reach the goal.
    Observation reset(const Scene &scene);
    /// Throws UsageError once the episode is done.
    StepResult step(const Action &action);

    /// Tracked steering for the current state.
    [[nodiscard]] double planner_steering() const;

    [[nodiscard]] const WorldState &state() const { return state_; }
    [[nodiscard]] const EnvConfig &config() const { return cfg_; }
    [[nodiscard]] Observation observation() const { return observe(state_, cfg_); }

  private:
    EnvConfig cfg_;
    WorldState state_;
    bool started_ = false;
    std::map<std::string, std::pair<std::shared_ptr<const CostMap>,
                                    std::shared_ptr<const PlannedPath>>>
        cache_;
};

} // namespace navq::env
