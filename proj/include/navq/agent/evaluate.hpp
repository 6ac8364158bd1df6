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
 * Driving-policy evaluation over a scene list and the summary metrics:
 * time to goal, crash and near-miss rates, and the safety index (number of
 * scenarios whose crash and near-miss rates are both under 20%).
 */
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "navq/agent/agent.hpp"
#include "navq/env/scene.hpp"
#include "navq/env/world.hpp"

namespace navq::agent {

/// Chooses the speed action; steering always comes from the planner.
class Policy {
  public:
    virtual ~Policy() = default;
    virtual void reset(const env::Scene &scene) = 0;
    virtual env::Acc act(const env::Observation &obs, const env::WorldState &state) = 0;
};

using PolicyFactory = std::function<std::unique_ptr<Policy>()>;

/// Argmax of the actor; the agent must outlive the policy.
class GreedyPolicy final : public Policy {
  public:
    GreedyPolicy(const Agent &agent, const env::EnvConfig &cfg) : agent_(agent), cfg_(cfg) {}
    void reset(const env::Scene &scene) override;
    env::Acc act(const env::Observation &obs, const env::WorldState &state) override;

  private:
    const Agent &agent_;
    env::EnvConfig cfg_;
    Agent::Recurrent state_;
};

class FixedPolicy final : public Policy {
  public:
    explicit FixedPolicy(env::Acc acc) : acc_(acc) {}
    void reset(const env::Scene &) override {}
    env::Acc act(const env::Observation &, const env::WorldState &) override { return acc_; }

  private:
    env::Acc acc_;
};

/// Uniform over the three speed actions, reseeded per scene from
/// derive_seed(seed, {scene id}).
class RandomPolicy final : public Policy {
  public:
    explicit RandomPolicy(std::uint64_t seed) : seed_(seed) {}
    void reset(const env::Scene &scene) override;
    env::Acc act(const env::Observation &, const env::WorldState &) override;

  private:
    std::uint64_t seed_;
    Rng rng_;
};

struct SceneOutcome {
    int scene_id = 0;
    int scenario_id = 0;
    env::Outcome outcome = env::Outcome::Running;
    int steps = 0;
    double time_s = 0.0;
    bool near_miss = false;
    double ret = 0.0;
};

struct ScenarioStats {
    int episodes = 0;
    double crash_rate = 0.0;     ///< percent
    double near_miss_rate = 0.0; ///< percent
    std::optional<double> ttg;
};

struct PolicyMetrics {
    std::optional<double> ttg;   ///< mean seconds over goal-reaching episodes
    double crash_rate = 0.0;     ///< percent of all episodes
    double near_miss_rate = 0.0; ///< percent of all episodes
    int safety_index = 0;
    int scenarios = 0;
    double mean_return = 0.0;
    int episodes = 0;
    std::map<int, ScenarioStats> per_scenario;
};

/// Aggregates outcomes; a scenario counts toward SI when both of its rates
/// are below `threshold` percent.
PolicyMetrics summarize(const std::vector<SceneOutcome> &outcomes, double dt,
                        double threshold = 20.0);

struct EvalResult {
    PolicyMetrics metrics;
    std::vector<SceneOutcome> outcomes; ///< in scene order
};

/// One episode per scene, in parallel; each worker owns its environment
/// and policy instance.
EvalResult evaluate_policy(const PolicyFactory &factory, const std::vector<env::Scene> &scenes,
                           const env::EnvConfig &cfg);

/// Greedy evaluation of a trained agent.
EvalResult evaluate_agent(const Agent &agent, const std::vector<env::Scene> &scenes,
                          const env::EnvConfig &cfg);

nlohmann::json to_json(const PolicyMetrics &m);

} // namespace navq::agent
