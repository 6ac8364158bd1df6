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
#include "navq/agent/a2c.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "navq/error.hpp"

namespace navq::agent {

namespace {

// Adds scale * g to the gradient buffers of `set`, in registration order.
void accumulate(nn::ParamSet &set, std::span<const double> g, double scale) {
    std::size_t k = 0;
    for (const auto &r : set.entries()) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            r.grad[i] += scale * g[k++];
        }
    }
}

double entropy_sign(bool literal) { return literal ? -1.0 : 1.0; }

} // namespace

std::vector<double> discounted_returns(std::span<const double> rewards, double gamma,
                                       double bootstrap) {
    require(gamma >= 0.0 && gamma <= 1.0, "gamma must be in [0, 1]");
    std::vector<double> g(rewards.size());
    double next = bootstrap;
    for (std::size_t i = rewards.size(); i-- > 0;) {
        next = rewards[i] + gamma * next;
        g[i] = next;
    }
    return g;
}

Losses compute_losses(std::span<const double> values, std::span<const double> returns,
                      std::span<const double> log_probs, std::span<const double> entropies,
                      double beta_entropy, bool literal_entropy) {
    const std::size_t n = values.size();
    require<UsageError>(n > 0, "compute_losses: empty trace");
    require<UsageError>(returns.size() == n && log_probs.size() == n && entropies.size() == n,
                        "compute_losses: length mismatch");
    const double sign = entropy_sign(literal_entropy);
    Losses l;
    for (std::size_t t = 0; t < n; ++t) {
        const double adv = returns[t] - values[t];
        l.value_loss += adv * adv;
        l.policy_objective += log_probs[t] * adv + beta_entropy * sign * entropies[t];
    }
    l.value_loss /= static_cast<double>(n);
    l.policy_objective /= static_cast<double>(n);
    return l;
}

ActionChoice select_action(const Vec &logits, Rng *rng) {
    const auto s = nn::softmax_entropy(logits);
    Eigen::Index pick = 0;
    if (rng == nullptr) {
        s.probs.maxCoeff(&pick);
    } else {
        const double u = rng->uniform();
        double acc = 0.0;
        pick = s.probs.size() - 1;
        for (Eigen::Index i = 0; i < s.probs.size(); ++i) {
            acc += s.probs(i);
            if (u < acc) {
                pick = i;
                break;
            }
        }
    }
    return {static_cast<int>(pick), s.log_probs(pick), s.entropy};
}

Rollout rollout_episode(const Agent &agent, env::Environment &env, const env::Scene &scene,
                        Rng &action_rng, bool greedy) {
    const auto &cfg = env.config();
    Rollout r;
    r.scene_id = scene.id;
    env::Observation obs = env.reset(scene);
    auto state = agent.initial_state();
    bool done = false;
    while (!done) {
        Vec x = observation_features(obs, cfg);
        Vec side = side_features(obs, env.state().car, cfg);
        const Vec h = agent.advance(x, side, state);
        const auto choice = select_action(agent.actor_logits(h), greedy ? nullptr : &action_rng);
        const auto res = env.step({acc_from_index(choice.index), env.planner_steering()});
        r.features.push_back(std::move(x));
        r.side.push_back(std::move(side));
        r.actions.push_back(choice.index);
        r.entropies.push_back(choice.entropy);
        r.rewards.push_back(res.reward.total());
        r.near_miss = r.near_miss ||
                      std::any_of(res.proximity.begin(), res.proximity.end(),
                                  [](env::Proximity p) { return p == env::Proximity::NearMiss; });
        obs = res.obs;
        done = res.done;
        r.outcome = res.outcome;
    }
    r.final_features = observation_features(obs, cfg);
    r.final_side = side_features(obs, env.state().car, cfg);
    return r;
}

ReplayResult replay_episode(Agent &agent, const Rollout &r, std::uint64_t noise_seed,
                            const Targets *fixed, bool backward) {
    const auto T = static_cast<std::size_t>(r.steps());
    require<UsageError>(T > 0, "replay_episode: empty rollout");
    const auto &cfg = agent.config();
    const Critic &critic = agent.critic();

    std::vector<Agent::StepCache> caches(T);
    auto state = agent.initial_state();
    for (std::size_t t = 0; t < T; ++t) {
        (void)agent.advance(r.features[t], r.side[t], state, &caches[t]);
    }

    ReplayResult out;
    out.values.assign(T, 0.0);
    std::vector<CriticGrad> cgrads(backward ? T : 0);
    const auto Ti = static_cast<std::int64_t>(T);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t ti = 0; ti < Ti; ++ti) {
        const auto t = static_cast<std::size_t>(ti);
        Rng noise(derive_seed(noise_seed, {t}));
        if (backward) {
            cgrads[t] = critic.value_and_grad(caches[t].h, noise);
            out.values[t] = cgrads[t].value;
        } else {
            out.values[t] = critic.value(caches[t].h, noise);
        }
    }

    if (r.truncated()) {
        auto tail = state;
        const Vec hT = agent.advance(r.final_features, r.final_side, tail);
        Rng noise(derive_seed(noise_seed, {T}));
        out.bootstrap = critic.value(hT, noise);
    }

    if (fixed) {
        require<UsageError>(fixed->returns.size() == T && fixed->advantages.size() == T,
                            "replay_episode: target length mismatch");
        out.targets = *fixed;
    } else {
        std::vector<double> scaled(r.rewards);
        for (auto &v : scaled) {
            v *= cfg.reward_scale;
        }
        out.targets.returns = discounted_returns(scaled, cfg.gamma, out.bootstrap);
        out.targets.advantages.resize(T);
        for (std::size_t t = 0; t < T; ++t) {
            out.targets.advantages[t] = out.targets.returns[t] - out.values[t];
        }
    }

    std::vector<nn::SoftmaxEntropy> dists;
    dists.reserve(T);
    std::vector<double> log_probs(T);
    std::vector<double> entropies(T);
    for (std::size_t t = 0; t < T; ++t) {
        dists.push_back(nn::softmax_entropy(agent.actor_logits(caches[t].h)));
        log_probs[t] = dists[t].log_probs(r.actions[t]);
        entropies[t] = dists[t].entropy;
    }

    // Value loss against the held returns; the policy term uses the held
    // advantages so no gradient reaches the critic through it.
    const double inv_t = 1.0 / static_cast<double>(T);
    const double sign = entropy_sign(cfg.literal_entropy);
    for (std::size_t t = 0; t < T; ++t) {
        const double err = out.targets.returns[t] - out.values[t];
        out.losses.value_loss += err * err * inv_t;
        out.losses.policy_objective +=
            (log_probs[t] * out.targets.advantages[t] + cfg.beta_entropy * sign * entropies[t]) *
            inv_t;
    }
    if (!backward) {
        return out;
    }

    agent.params().zero_grad();
    nn::ParamSet &critic_params = agent.critic().params();
    const auto H = static_cast<Eigen::Index>(cfg.model.lstm_hidden);
    std::vector<Vec> dh(T, Vec::Zero(H));
    for (std::size_t t = 0; t < T; ++t) {
        const double dv = -2.0 * (out.targets.returns[t] - out.values[t]) * inv_t;
        accumulate(critic_params, cgrads[t].d_params, dv);
        dh[t] += dv * cgrads[t].d_input;
        const Vec dlogits = nn::softmax_entropy_backward(
            dists[t], r.actions[t], -out.targets.advantages[t] * inv_t,
            -cfg.beta_entropy * sign * inv_t);
        dh[t] += agent.actor.backward(caches[t].h, dlogits);
    }
    Vec dh_next = Vec::Zero(H);
    Vec dc_next = Vec::Zero(H);
    for (std::size_t t = T; t-- > 0;) {
        auto [dhp, dcp] = agent.backward_step(caches[t], dh[t] + dh_next, dc_next);
        dh_next = std::move(dhp);
        dc_next = std::move(dcp);
    }
    return out;
}

std::vector<double> RunRecord::returns() const {
    std::vector<double> out;
    out.reserve(episodes.size());
    for (const auto &e : episodes) {
        out.push_back(e.ret);
    }
    return out;
}

Trainer::Trainer(Agent &agent, const env::EnvConfig &env_cfg, std::vector<env::Scene> scenes)
    : agent_(agent), env_(env_cfg), scenes_(std::move(scenes)),
      scene_rng_(Rng::substream(agent.config().seed, "env")),
      action_rng_(Rng::substream(agent.config().seed, "policy")),
      noise_base_(substream_seed(agent.config().seed, "noise")) {
    require(!scenes_.empty(), "training needs at least one scene");
}

EpisodeRecord Trainer::train_episode() {
    const auto &scene = scenes_[scene_rng_.index(scenes_.size())];
    const Rollout r = rollout_episode(agent_, env_, scene, action_rng_);
    const auto rep = replay_episode(
        agent_, r, derive_seed(noise_base_, {static_cast<std::uint64_t>(episode_)}), nullptr,
        true);
    nn::adam_update(agent_.optimizer(), agent_.params());

    EpisodeRecord rec;
    rec.episode = episode_++;
    rec.scene_id = r.scene_id;
    rec.ret = std::accumulate(r.rewards.begin(), r.rewards.end(), 0.0);
    rec.entropy = std::accumulate(r.entropies.begin(), r.entropies.end(), 0.0) /
                  static_cast<double>(r.steps());
    rec.steps = r.steps();
    rec.outcome = r.outcome;
    rec.value_loss = rep.losses.value_loss;
    return rec;
}

TrainResult train_run(const AgentConfig &cfg, const env::EnvConfig &env_cfg,
                      const std::vector<env::Scene> &scenes, const EpisodeCallback &on_episode) {
    require(!scenes.empty(), "training needs at least one scene");
    TrainResult out;
    out.agent = std::make_unique<Agent>(
        cfg, static_cast<int>(env::Observation::flat_size(env_cfg.k_nearest)));
    out.agent->init();
    Trainer trainer(*out.agent, env_cfg, scenes);
    for (int e = 0; e < cfg.episodes; ++e) {
        out.record.episodes.push_back(trainer.train_episode());
        if (on_episode) {
            on_episode(out.record.episodes.back());
        }
    }
    return out;
}

} // namespace navq::agent
