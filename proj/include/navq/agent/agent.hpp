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
 * Recurrent actor-critic network.
 *
 *   obs features -> Dense(64) -> tanh -> Dense(enc_out) -> tanh
 *   [encoding, prev reward, vx, vy, prev speed action] -> LSTM -> h
 *   h -> Dense(3) actor logits over {accelerate, maintain, decelerate}
 *   h -> critic (quantum or classical)
 *
 * Steering is not learned; it comes from the path planner.
 */
#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "navq/agent/critic.hpp"
#include "navq/env/world.hpp"
#include "navq/nn/layers.hpp"
#include "navq/nn/params.hpp"

namespace navq::agent {

enum class CriticKind { Quantum, Classical };

const char *to_string(CriticKind k);

struct ModelConfig {
    int enc_hidden = 64;
    int enc_out = 28;
    int lstm_hidden = 32;
};

struct AgentConfig {
    CriticKind critic = CriticKind::Quantum;
    QuantumCriticConfig quantum;
    int classical_hidden = 64;
    ModelConfig model;
    double gamma = 0.99;
    double beta_entropy = 0.01;
    /// Use the literal sum p log p in place of the entropy bonus.
    bool literal_entropy = false;
    double lr = 0.0005;
    /// Rewards are multiplied by this before computing returns; recorded
    /// episode returns stay in raw units.
    double reward_scale = 0.01;
    int episodes = 100;
    std::uint64_t seed = 0;

    void validate() const;
};

nlohmann::json to_json(const AgentConfig &cfg);
/// Unknown keys are a ConfigError.
AgentConfig agent_config_from_json(const nlohmann::json &j);

/// Scaled observation vector fed to the encoder.
Vec observation_features(const env::Observation &obs, const env::EnvConfig &cfg);
/// (prev reward, vx, vy, prev speed action in {-1, 0, 1}) appended to the
/// encoder output.
Vec side_features(const env::Observation &obs, const env::CarState &car,
                  const env::EnvConfig &cfg);
inline constexpr int kSideFeatures = 4;

class Agent {
  public:
    struct Recurrent {
        Vec h, c;
    };
    struct StepCache {
        Vec x;   ///< observation features
        Vec side;
        Vec e1;  ///< tanh(Dense1 x)
        Vec e2;  ///< tanh(Dense2 e1)
        nn::LstmCell::Cache lstm;
        Vec h;
    };

    Agent(AgentConfig cfg, int obs_dim);
    Agent(const Agent &) = delete;
    Agent &operator=(const Agent &) = delete;

    /// Draws every parameter from the "init" substream of the seed.
    void init();
    void init(Rng &rng);

    [[nodiscard]] Recurrent initial_state() const;
    /// Advances the recurrent state and returns the new hidden vector.
    Vec advance(const Vec &x, const Vec &side, Recurrent &state, StepCache *cache = nullptr) const;
    [[nodiscard]] Vec actor_logits(const Vec &h) const { return actor.forward(h); }

    /// Backward through the trunk for one step: accumulates encoder/LSTM
    /// gradients, returns (dh_prev, dc_prev).
    std::pair<Vec, Vec> backward_step(const StepCache &cache, const Vec &dh, const Vec &dc);

    [[nodiscard]] const AgentConfig &config() const { return cfg_; }
    [[nodiscard]] int obs_dim() const { return obs_dim_; }
    [[nodiscard]] Critic &critic() { return *critic_; }
    [[nodiscard]] const Critic &critic() const { return *critic_; }
    [[nodiscard]] nn::ParamSet &params() { return params_; }
    [[nodiscard]] const nn::ParamSet &params() const { return params_; }
    [[nodiscard]] nn::AdamState &optimizer() { return adam_; }

    /// Parameters outside the critic.
    [[nodiscard]] std::size_t trunk_param_count() const;

    /// {"format", "agent_config", "obs_dim", "critic", "params"}.
    [[nodiscard]] nlohmann::json checkpoint() const;
    /// InputError on a malformed or mismatched checkpoint.
    static std::unique_ptr<Agent> from_checkpoint(const nlohmann::json &j);

    nn::DenseLayer enc1;
    nn::DenseLayer enc2;
    nn::LstmCell lstm;
    nn::DenseLayer actor;

  private:
    AgentConfig cfg_;
    int obs_dim_;
    std::unique_ptr<Critic> critic_;
    nn::ParamSet params_;
    nn::AdamState adam_;
};

} // namespace navq::agent
