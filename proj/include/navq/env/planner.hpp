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
 * Hybrid A* over (x, y, heading) with one motion primitive per steering
 * bin, plus a pure-pursuit tracker that maps the planned path back onto
 * the steering bins at every control step.
 */
#pragma once

#include <vector>

#include "navq/env/cost_map.hpp"
#include "navq/env/geometry.hpp"

namespace navq::env {

/// Steering bins in degrees.
inline constexpr double kSteeringBinsDeg[] = {-50.0, -25.0, 0.0, 25.0, 50.0};
inline constexpr int kNumSteeringBins = 5;

double steering_bin_rad(int bin);

struct PlannerConfig {
    double step_length = 1.0;       ///< arc length per primitive (m)
    int substeps = 4;               ///< collision samples per primitive
    int heading_bins = 72;
    double xy_resolution = 0.5;     ///< closed-set cell size (m)
    double wheelbase = 2.5;
    double footprint_length = 4.5;  ///< 0 for a point robot
    double footprint_width = 2.0;
    double goal_tolerance = 1.0;
    double heuristic_weight = 1.0;
    double steer_penalty = 0.01;    ///< added per primitive with nonzero steering
    int lethal_cost = kCollisionCost;
    int max_expansions = 200000;
    double lookahead_min = 4.0;     ///< pure pursuit (m)
    double lookahead_time = 1.0;    ///< pure pursuit (s)

    void validate() const;
};

struct PlannedPath {
    /// Empty when start already satisfies the goal; otherwise starts with
    /// the start pose.
    std::vector<Pose> poses;
    /// Steering angle (rad) of each primitive; size = poses.size() - 1.
    std::vector<double> steering;
    double cost = 0.0;

    [[nodiscard]] bool empty() const { return poses.empty(); }
};

/// Footprint of a car-like body at `pose`.
OrientedRect footprint(const Pose &pose, double length, double width);

/// Advances `pose` by `ds` metres of arc under steering angle `alpha`.
Pose bicycle_advance(const Pose &pose, double ds, double alpha, double wheelbase);

/// Minimum-cost search. Throws PlanningError if the goal cannot be reached
/// without entering a lethal cell or the expansion budget runs out.
PlannedPath plan_path(const CostMap &map, const Pose &start, Vec2 goal,
                      const PlannerConfig &cfg = {});

/// Cost the planner would assign to following `poses` with `steering`.
double path_cost(const CostMap &map, const std::vector<Pose> &poses,
                 const std::vector<double> &steering, const PlannerConfig &cfg);

/// Pure-pursuit steering quantised to the nearest bin; 0 for an empty path.
double track_steering(const PlannedPath &path, const Pose &car, double speed,
                      const PlannerConfig &cfg);

/// Signed lateral distance from `p` to the path polyline (positive = left
/// of the direction of travel); 0 for an empty path.
double cross_track_error(const PlannedPath &path, Vec2 p);

} // namespace navq::env
