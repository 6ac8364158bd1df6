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
 * Advantage actor-critic training.
 *
 * An episode is rolled out with the current weights, then replayed with
 * caches to compute the losses
 *
 *   J_V  = mean_t (G_t - V_t)^2
 *   J_pi = mean_t [log pi(a_t) A_t + beta H_t],   A_t = G_t - V_t (constant)
 *
 * and one Adam step is taken on J_V - J_pi over every parameter.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "navq/agent/agent.hpp"
#include "navq/env/scene.hpp"
#include "navq/env/world.hpp"
#include "navq/nn/layers.hpp"
#include "navq/rng.hpp"

namespace navq::agent {

/// G_t = r_t + gamma G_{t+1}, with G_T = bootstrap.
std::vector<double> discounted_returns(std::span<const double> rewards, double gamma,
                                       double bootstrap);

struct Losses {
    double value_loss = 0.0;       ///< J_V
    double policy_objective = 0.0; ///< J_pi (ascended)
    [[nodiscard]] double total() const { return value_loss - policy_objective; }
};

/// UsageError if the lengths differ or are zero.
Losses compute_losses(std::span<const double> values, std::span<const double> returns,
                      std::span<const double> log_probs, std::span<const double> entropies,
                      double beta_entropy, bool literal_entropy = false);

struct ActionChoice {
    int index = 0;
    double log_prob = 0.0;
    double entropy = 0.0;
};

/// Samples from softmax(logits) with `rng`, or takes the argmax when `rng`
/// is null.
ActionChoice select_action(const Vec &logits, Rng *rng);

inline env::Acc acc_from_index(int i) { return static_cast<env::Acc>(i); }

/// One rolled-out episode: everything needed to replay it.
struct Rollout {
    int scene_id = 0;
    std::vector<Vec> features;
    std::vector<Vec> side;
    std::vector<int> actions;
    std::vector<double> rewards;
    std::vector<double> entropies;
    env::Outcome outcome = env::Outcome::Running;
    /// Inputs observed after the last step; used to bootstrap truncated
    /// episodes.
    Vec final_features;
    Vec final_side;
    bool near_miss = false;

    [[nodiscard]] bool truncated() const { return outcome == env::Outcome::Timeout; }
    [[nodiscard]] int steps() const { return static_cast<int>(actions.size()); }
};

/// Runs one episode. Sampling draws from `action_rng`; with `greedy` the
/// argmax is taken and `action_rng` is not touched.
Rollout rollout_episode(const Agent &agent, env::Environment &env, const env::Scene &scene,
                        Rng &action_rng, bool greedy = false);

/// Returns and advantages held fixed while differentiating.
struct Targets {
    std::vector<double> returns;
    std::vector<double> advantages;
};

struct ReplayResult {
    Losses losses;
    std::vector<double> values;
    Targets targets;
    double bootstrap = 0.0;
};

/// Replays `r` through the current weights. Critic noise for step t is
/// seeded by derive_seed(noise_seed, {t}). Targets are computed from the
/// replay unless `fixed` is given. With `backward`, gradients of
/// J_V - J_pi are written into the agent's gradient buffers (after zeroing).
ReplayResult replay_episode(Agent &agent, const Rollout &r, std::uint64_t noise_seed,
                            const Targets *fixed, bool backward);

struct EpisodeRecord {
    int episode = 0;
    int scene_id = 0;
    double ret = 0.0;     ///< undiscounted sum of rewards
    double entropy = 0.0; ///< mean policy entropy over the episode
    int steps = 0;
    env::Outcome outcome = env::Outcome::Running;
    double value_loss = 0.0;
};

struct RunRecord {
    std::vector<EpisodeRecord> episodes;
    [[nodiscard]] std::vector<double> returns() const;
};

/// Owns the per-run RNG streams and drives one Adam step per episode.
class Trainer {
  public:
    Trainer(Agent &agent, const env::EnvConfig &env_cfg, std::vector<env::Scene> scenes);

    EpisodeRecord train_episode();
    [[nodiscard]] int episodes_done() const { return episode_; }

  private:
    Agent &agent_;
    env::Environment env_;
    std::vector<env::Scene> scenes_;
    Rng scene_rng_;
    Rng action_rng_;
    std::uint64_t noise_base_;
    int episode_ = 0;
};

struct TrainResult {
    RunRecord record;
    std::unique_ptr<Agent> agent;
};

using EpisodeCallback = std::function<void(const EpisodeRecord &)>;

/// Builds and initialises an agent from `cfg`, then trains it for
/// cfg.episodes episodes. ConfigError on an empty scene list.
TrainResult train_run(const AgentConfig &cfg, const env::EnvConfig &env_cfg,
                      const std::vector<env::Scene> &scenes,
                      const EpisodeCallback &on_episode = {});

} // namespace navq::agent
